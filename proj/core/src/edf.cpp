#include "mzlaw/edf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace mzlaw {

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> sample)
    : sorted_(sample.begin(), sample.end()) {
    if (sorted_.empty()) {
        throw std::invalid_argument("EmpiricalDistribution: empty sample");
    }
    if (std::any_of(sorted_.begin(), sorted_.end(), [](double x) { return std::isnan(x); })) {
        throw std::invalid_argument("EmpiricalDistribution: NaN in sample");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::left_limit(double x) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalDistribution build_edf(std::span<const double> sample) {
    return EmpiricalDistribution(sample);
}

double quantile_left(const EmpiricalDistribution& edf, double y) {
    if (std::isnan(y)) {
        return y;
    }
    if (y <= 0.0) {
        return -kInf;
    }
    if (y > 1.0) {
        return kInf;
    }
    const auto n = static_cast<double>(edf.size());
    const double p = n * y;
    const double err = std::fma(n, y, -p);  // n*y == p + err exactly
    double k = std::ceil(p);
    if (k == p && err > 0.0) {
        k += 1.0;
    }
    k = std::clamp(k, 1.0, n);
    return edf.order_statistic(static_cast<std::size_t>(k));
}

double edf_quantile(const EmpiricalDistribution& edf, double y) {
    if (!(y > 0.0 && y <= 1.0)) {
        throw std::invalid_argument("edf_quantile: y must lie in (0, 1]");
    }
    return quantile_left(edf, y);
}

namespace {

// |level - F(x)| with the two extreme levels taken from F and 1 - F directly.
double deviation(const DistributionModel& model, double level, double x) {
    if (level == 0.0) {
        return cdf_eval(model, x);
    }
    if (level == 1.0) {
        return survival_eval(model, x);
    }
    return std::fabs(level - cdf_eval(model, x));
}

double weighted(double dev, double phi) { return dev == 0.0 ? 0.0 : dev * phi; }

struct TailThresholds {
    // F*phi is nondecreasing on (-inf, left]; (1-F)*phi is nonincreasing on [right, inf).
    double left = kInf;
    double right = -kInf;
    bool unbounded = false;
};

TailThresholds tail_thresholds(const DistributionModel& model, const WeightFunction& w) {
    TailThresholds t;
    switch (w.kind) {
        case WeightKind::Uniform:
            return t;
        case WeightKind::AdaptiveGammaF:
            if (*w.base_model == model) {
                // F^(1-gamma) and F * Fbar^-gamma are monotone on each side of 0;
                // the jump at 0 is covered by explicit candidates.
                return t;
            }
            break;
        case WeightKind::Poly:
            switch (model.kind) {
                case DistributionKind::Uniform01:
                    t.right = std::max(0.0, (w.lambda - 1.0) / (w.lambda + 1.0));
                    return t;
                case DistributionKind::StdNormal: {
                    // Mills ratio: d/dx log(Phi(x)(1-x)^lambda) >= |x| - lambda/(1+|x|) for x < 0.
                    const double knee = (-1.0 + std::sqrt(1.0 + 4.0 * w.lambda)) / 2.0;
                    t.left = -knee;
                    t.right = knee;
                    return t;
                }
                case DistributionKind::ParetoTwoSided:
                    if (w.lambda > model.tail_alpha) {
                        t.unbounded = true;
                    }
                    t.left = -model.x0;
                    t.right = model.x0;
                    return t;
            }
            break;
    }
    std::clog << "mzlaw: no tail bound for this (model, weight) pair; truncating at quantiles 1e-6\n";
    t.left = quantile_left(model, 1e-6);
    t.right = quantile_left(model, 1.0 - 1e-6, 1e-6);
    return t;
}

struct Candidate {
    double value = -1.0;
    double level = 0.0;
    double u_lo = 0.0;
    double u_hi = 0.0;
};

class SupScanner {
public:
    SupScanner(const DistributionModel& model, const WeightFunction& w, std::size_t resolution)
        : model_(model), w_(w), resolution_(resolution) {}

    void point(double level, double x, bool left_limit = false) {
        const double phi = left_limit ? weight_left_limit(w_, x) : weight_eval(w_, x);
        best_ = std::max(best_, weighted(deviation(model_, level, x), phi));
    }

    // Open gap (a, b) on which F_n == level.
    void gap(double a, double b, double level) {
        if (!(a < b) || w_.kind == WeightKind::Uniform) {
            return;
        }
        const double ua = std::isfinite(a) ? cdf_eval(model_, a) : (a < 0 ? 0.0 : 1.0);
        const double ub = std::isfinite(b) ? cdf_eval(model_, b) : (b < 0 ? 0.0 : 1.0);
        if (!(ua < ub)) {
            return;
        }
        const double step = (ub - ua) / static_cast<double>(resolution_ + 1);
        for (std::size_t j = 1; j <= resolution_; ++j) {
            const double u = ua + step * static_cast<double>(j);
            const double v = at_u(u, level);
            if (v > best_) {
                best_ = v;
            }
            offer(Candidate{v, level, u - step, u + step});
        }
    }

    double finish() {
        for (const auto& c : top_) {
            if (c.value >= 0.0) {
                polish(c);
            }
        }
        return best_;
    }

private:
    double at_u(double u, double level) const {
        if (!(u > 0.0 && u < 1.0)) {
            return 0.0;
        }
        const double x = quantile_left(model_, u, 1.0 - u);
        const double dev = level == 1.0 ? 1.0 - u : std::fabs(level - u);
        return weighted(dev, weight_eval(w_, x));
    }

    void offer(const Candidate& c) {
        auto worst = std::min_element(top_.begin(), top_.end(),
                                      [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
        if (c.value > worst->value) {
            *worst = c;
        }
    }

    void polish(const Candidate& c) {
        constexpr double inv_phi = 0.6180339887498949;
        double lo = c.u_lo;
        double hi = c.u_hi;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = at_u(x1, c.level);
        double f2 = at_u(x2, c.level);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = at_u(x2, c.level);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = at_u(x1, c.level);
            }
        }
        best_ = std::max({best_, f1, f2});
    }

    const DistributionModel& model_;
    const WeightFunction& w_;
    std::size_t resolution_;
    double best_ = 0.0;
    std::array<Candidate, 3> top_{};
};

}  // namespace

double weighted_deviation_at(const EmpiricalDistribution& edf, const DistributionModel& model,
                             const WeightFunction& w, double x) {
    return weighted(deviation(model, edf(x), x), weight_eval(w, x));
}

double weighted_sup_norm(const EmpiricalDistribution& edf, const DistributionModel& model,
                         const WeightFunction& w, std::size_t resolution, double x_upper) {
    if (resolution == 0) {
        throw std::invalid_argument("weighted_sup_norm: resolution must be at least 1");
    }
    w.validate();
    const TailThresholds tails = tail_thresholds(model, w);
    if (tails.unbounded) {
        return kInf;
    }

    SupScanner scan(model, w, resolution);
    const auto xs = edf.sorted_values();
    const auto n = static_cast<double>(xs.size());

    // Walk distinct jump points v_1 < ... < v_m with F_n = level on (v_k, v_{k+1}).
    double prev = -kInf;
    double level = 0.0;
    std::size_t i = 0;
    bool first = true;
    while (i < xs.size() && xs[i] <= x_upper) {
        const double v = xs[i];
        std::size_t j = i;
        while (j < xs.size() && xs[j] == v) {
            ++j;
        }
        const double next_level = static_cast<double>(j) / n;
        if (first) {
            if (tails.left < v) {
                scan.point(0.0, tails.left);
                scan.gap(tails.left, v, 0.0);
            }
            first = false;
        } else {
            scan.gap(prev, v, level);
        }
        scan.point(level, v, true);
        scan.point(next_level, v);
        prev = v;
        level = next_level;
        i = j;
    }

    if (first) {
        // No sample point at or below x_upper: F_n == 0 on the whole range.
        if (tails.left < x_upper) {
            scan.point(0.0, tails.left);
            scan.gap(tails.left, x_upper, 0.0);
        }
    } else if (std::isinf(x_upper) && level == 1.0) {
        if (tails.right > prev) {
            scan.gap(prev, tails.right, 1.0);
            scan.point(1.0, tails.right);
        }
    } else {
        scan.gap(prev, x_upper, level);
    }
    if (std::isfinite(x_upper)) {
        scan.point(edf(x_upper), x_upper);
    }
    if (w.kind != WeightKind::Uniform && w.x_phi <= x_upper) {
        scan.point(edf(w.x_phi), w.x_phi);
        scan.point(edf.left_limit(w.x_phi), w.x_phi, true);
    }
    return scan.finish();
}

}  // namespace mzlaw
