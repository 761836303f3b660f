#include "mzlaw/distributions.hpp"

#include "mzlaw/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mzlaw {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double y, double yc) {
    if (y <= 0.5) {
        return -kSqrt2 * boost::math::erfc_inv(2.0 * y);
    }
    return kSqrt2 * boost::math::erfc_inv(2.0 * yc);
}

}  // namespace

DistributionModel DistributionModel::uniform01() {
    DistributionModel m;
    m.kind = DistributionKind::Uniform01;
    m.name = "uniform01";
    return m;
}

DistributionModel DistributionModel::std_normal() {
    DistributionModel m;
    m.kind = DistributionKind::StdNormal;
    m.name = "std_normal";
    return m;
}

DistributionModel DistributionModel::pareto_two_sided(double alpha, double x0, double c1,
                                                      double c2) {
    DistributionModel m;
    m.kind = DistributionKind::ParetoTwoSided;
    m.tail_alpha = alpha;
    m.x0 = x0;
    m.c1 = c1;
    m.c2 = c2;
    m.name = "pareto_two_sided";
    m.validate();
    return m;
}

double DistributionModel::tail_pow() const { return std::pow(x0, -tail_alpha); }

void DistributionModel::validate() const {
    if (kind != DistributionKind::ParetoTwoSided) {
        return;
    }
    if (!(tail_alpha > 0) || !(x0 > 0) || !(c1 > 0) || !(c2 > 0) || !std::isfinite(tail_alpha) ||
        !std::isfinite(x0) || !std::isfinite(c1) || !std::isfinite(c2)) {
        throw std::invalid_argument("pareto_two_sided: alpha, x0, c1, c2 must be positive and finite");
    }
    if (!((c1 + c2) * tail_pow() < 1.0)) {
        throw std::invalid_argument(
            "pareto_two_sided: need (c1 + c2) * x0^-alpha < 1 for a continuous bridge");
    }
}

std::pair<double, double> DistributionModel::support() const {
    if (kind == DistributionKind::Uniform01) {
        return {0.0, 1.0};
    }
    return {-kInf, kInf};
}

double cdf_eval(const DistributionModel& model, double x) {
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return std::clamp(x, 0.0, 1.0);
        case DistributionKind::StdNormal:
            return normal_cdf(x);
        case DistributionKind::ParetoTwoSided: {
            if (x <= -model.x0) {
                return model.c1 * std::pow(-x, -model.tail_alpha);
            }
            if (x >= model.x0) {
                return 1.0 - model.c2 * std::pow(x, -model.tail_alpha);
            }
            const double lo = model.bridge_lower();
            const double hi = model.bridge_upper();
            return lo + (hi - lo) * (x + model.x0) / (2.0 * model.x0);
        }
    }
    return 0.0;
}

double survival_eval(const DistributionModel& model, double x) {
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return 1.0 - std::clamp(x, 0.0, 1.0);
        case DistributionKind::StdNormal:
            return normal_cdf(-x);
        case DistributionKind::ParetoTwoSided: {
            if (x >= model.x0) {
                return model.c2 * std::pow(x, -model.tail_alpha);
            }
            if (x <= -model.x0) {
                return 1.0 - model.c1 * std::pow(-x, -model.tail_alpha);
            }
            const double lo = model.bridge_lower();
            const double hi = model.bridge_upper();
            const double hic = model.c2 * std::pow(model.x0, -model.tail_alpha);
            // 1 - F on the bridge, measured from the right end.
            return hic + (hi - lo) * (model.x0 - x) / (2.0 * model.x0);
        }
    }
    return 0.0;
}

double quantile_left(const DistributionModel& model, double y) {
    return quantile_left(model, y, 1.0 - y);
}

double quantile_left(const DistributionModel& model, double y, double yc) {
    if (std::isnan(y)) {
        return y;
    }
    if (y <= 0.0) {
        return -kInf;
    }
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return y <= 1.0 ? y : kInf;
        case DistributionKind::StdNormal:
            if (yc <= 0.0) {
                return kInf;
            }
            return normal_quantile(y, yc);
        case DistributionKind::ParetoTwoSided: {
            if (yc <= 0.0) {
                return kInf;
            }
            const double lo = model.bridge_lower();
            const double hi = model.bridge_upper();
            const double inv_alpha = 1.0 / model.tail_alpha;
            if (y <= lo) {
                return -std::pow(model.c1, inv_alpha) * std::pow(y, -inv_alpha);
            }
            if (y >= hi) {
                return std::pow(model.c2, inv_alpha) * std::pow(yc, -inv_alpha);
            }
            return -model.x0 + 2.0 * model.x0 * (y - lo) / (hi - lo);
        }
    }
    return kInf;
}

double quantile_left(const std::function<double(double)>& H, double y, double lo, double hi) {
    if (H(lo) >= y) {
        return lo;
    }
    if (H(hi) < y) {
        return kInf;
    }
    // Invariant: H(lo) < y <= H(hi).
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (H(mid) >= y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

void MonotoneFunctionSamples::validate() const {
    if (grid.empty() || grid.size() != values.size()) {
        throw std::invalid_argument("MonotoneFunctionSamples: grid and values must be nonempty and equal length");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] >= grid[i - 1])) {
            throw std::invalid_argument("MonotoneFunctionSamples: grid must be nondecreasing");
        }
        const bool ok = direction == Monotonicity::Nonincreasing ? values[i] <= values[i - 1]
                                                                 : values[i] >= values[i - 1];
        if (!ok) {
            throw std::invalid_argument("MonotoneFunctionSamples: values violate the declared direction");
        }
    }
}

double inverse_right(const MonotoneFunctionSamples& h, double y) {
    h.validate();
    if (h.direction != Monotonicity::Nonincreasing) {
        throw std::invalid_argument("inverse_right: needs a nonincreasing function");
    }
    // Last index whose step value exceeds y; values are nonincreasing.
    const auto it = std::partition_point(h.values.begin(), h.values.end(),
                                         [y](double v) { return v > y; });
    if (it == h.values.begin()) {
        return 0.0;
    }
    const auto idx = static_cast<std::size_t>(it - h.values.begin());
    if (idx == h.values.size()) {
        return kInf;
    }
    return std::max(0.0, h.grid[idx]);
}

double inverse_right(const std::function<double(double)>& h, double y, double x_max) {
    if (!(h(0.0) > y)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (h(hi) > y) {
        lo = hi;
        hi *= 2.0;
        if (hi > x_max) {
            return kInf;
        }
    }
    // Invariant: h(lo) > y >= h(hi).
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (h(mid) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

std::vector<double> sample_iid(const DistributionModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_iid: n must be at least 1");
    }
    model.validate();
    UniformStream stream(seed);
    std::vector<double> out(n);
    for (auto& x : out) {
        const double u = stream.next();
        x = quantile_left(model, u, 1.0 - u);
    }
    return out;
}

double model_mean(const DistributionModel& model) {
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return 0.5;
        case DistributionKind::StdNormal:
            return 0.0;
        case DistributionKind::ParetoTwoSided: {
            const double a = model.tail_alpha;
            if (a <= 1.0) {
                return kInf;
            }
            // The bridge density is flat and symmetric, so only the tails contribute.
            return (model.c2 - model.c1) * a * std::pow(model.x0, 1.0 - a) / (a - 1.0);
        }
    }
    return kInf;
}

double model_variance(const DistributionModel& model) {
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return 1.0 / 12.0;
        case DistributionKind::StdNormal:
            return 1.0;
        case DistributionKind::ParetoTwoSided: {
            const double a = model.tail_alpha;
            if (a <= 2.0) {
                return kInf;
            }
            const double x0 = model.x0;
            const double tails = (model.c1 + model.c2) * a * std::pow(x0, 2.0 - a) / (a - 2.0);
            const double bridge = (model.bridge_upper() - model.bridge_lower()) * x0 * x0 / 3.0;
            const double m = model_mean(model);
            return tails + bridge - m * m;
        }
    }
    return kInf;
}

std::string format_extended(double value) {
    if (value == kInf) {
        return "inf";
    }
    if (value == -kInf) {
        return "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace mzlaw
