#include "mzlaw/brackets.hpp"

#include "mzlaw/edf.hpp"
#include "mzlaw/functionals.hpp"
#include "mzlaw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mzlaw {

namespace {

constexpr double kPointwiseRelTol = 1e-12;

double limit_at_left_end(const DistributionModel& model, const WeightFunction& phi) {
    const double a = model.support().first;
    if (std::isfinite(a)) {
        return weight_eval(phi, a);
    }
    switch (phi.kind) {
        case WeightKind::Uniform:
            return 1.0;
        case WeightKind::Poly:
            return phi.lambda == 0.0 ? 1.0 : kInf;
        case WeightKind::AdaptiveGammaF:
            return kInf;
    }
    return kInf;
}

bool le_tol(double x, double y) {
    return x <= y || x <= y + kPointwiseRelTol * std::fabs(y);
}

}  // namespace

BracketWeight::BracketWeight(DistributionModel model, WeightFunction phi)
    : model_(std::move(model)), phi_(std::move(phi)) {
    model_.validate();
    phi_.validate();
    cutoff_ = cdf_eval(model_, 0.0);
    limit_at_zero_ = cutoff_ > 0.0 ? limit_at_left_end(model_, phi_) : 0.0;
}

double BracketWeight::operator()(double t) const {
    if (t > cutoff_) {
        return 0.0;
    }
    if (t <= 0.0) {
        return limit_at_zero_;
    }
    // F^<-(t) <= 0 on [0, F(0)]; the clamp absorbs rounding in the quantile.
    const double x = std::min(quantile_left(model_, t, 1.0 - t), 0.0);
    return weight_eval(phi_, x);
}

double BracketWeight::right_limit(double t) const {
    if (t >= cutoff_) {
        return 0.0;
    }
    if (t <= 0.0) {
        return limit_at_zero_;
    }
    return (*this)(t);
}

double BracketWeight::integral(double a, double b, double tol) const {
    b = std::min(b, cutoff_);
    if (!(b > a)) {
        return 0.0;
    }
    const quad::Result r = quad::integrate([this](double t) { return (*this)(t); }, a, b, tol);
    if (!r.finite) {
        throw ConditionViolation("bracket weight is not integrable on the requested range");
    }
    return r.value;
}

BracketWeight bracket_weight(const DistributionModel& model, const WeightFunction& phi) {
    const IntegrabilityVerdict v = theorem1_integrability(model, phi, 0.0);
    if (!v.holds) {
        throw ConditionViolation("int phi dF diverges: " + v.certificate);
    }
    if (phi.x_phi < 0.0) {
        throw std::invalid_argument("bracket weight needs phi nonincreasing on the negative axis");
    }
    return BracketWeight(model, phi);
}

BracketPartition build_partition(const BracketWeight& w, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("build_partition: epsilon must be positive");
    }
    BracketPartition p;
    p.epsilon = epsilon;
    p.t_points.push_back(0.0);
    p.w_values.push_back(w.right_limit(0.0));
    const double target = epsilon * (1.0 - kBracketSafety);
    const double c = w.cutoff();

    double a = 0.0;
    while (a < c) {
        const double wa = w.right_limit(a);
        auto size = [&](double b, double& w_int) {
            w_int = w.integral(a, b);
            const double head = a > 0.0 ? (wa - w(b)) * a : 0.0;
            return head + w_int;
        };
        double w_int = 0.0;
        double b = c;
        double sz = size(c, w_int);
        if (sz > target) {
            double lo = a;
            double hi = c;
            double lo_int = 0.0;
            double lo_size = 0.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = lo + (hi - lo) / 2;
                if (mid <= lo || mid >= hi) {
                    break;
                }
                double mid_int = 0.0;
                const double mid_size = size(mid, mid_int);
                if (mid_size <= target) {
                    lo = mid;
                    lo_int = mid_int;
                    lo_size = mid_size;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-13 * hi) {
                    break;
                }
            }
            if (!(lo > a)) {
                throw std::runtime_error("build_partition: no progress; epsilon too small");
            }
            b = lo;
            w_int = lo_int;
            sz = lo_size;
        }
        p.t_points.push_back(b);
        p.w_values.push_back(w(b));
        p.bracket_integrals.push_back(sz);
        p.w_integrals.push_back(w_int);
        a = b;
    }
    if (p.t_points.back() < 1.0) {
        p.t_points.push_back(1.0);
        p.w_values.push_back(0.0);
        p.bracket_integrals.push_back(0.0);
        p.w_integrals.push_back(0.0);
    }
    p.m = p.t_points.size() - 1;
    return p;
}

BracketVerification verify_brackets(const BracketPartition& partition, const BracketWeight& w,
                                    std::span<const double> s_grid, std::size_t argument_points) {
    const auto& t = partition.t_points;
    if (t.size() < 2 || t.front() != 0.0 || t.back() != 1.0) {
        throw std::invalid_argument("verify_brackets: partition must run from 0 to 1");
    }
    if (argument_points < 2) {
        throw std::invalid_argument("verify_brackets: need at least two argument points");
    }
    BracketVerification out;
    auto fail = [&out](std::size_t i, std::string why) {
        if (out.holds) {
            out.holds = false;
            out.offending_index = i;
            out.reason = std::move(why);
        }
    };

    const double c = w.cutoff();
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = t[i - 1];
        const double b = t[i];
        if (!(b > a)) {
            fail(i, "partition points not increasing");
            continue;
        }
        double w_int = 0.0;
        if (std::min(b, c) > a) {
            const quad::Result r = quad::integrate_gauss_kronrod(
                [&w](double x) { return w(x); }, a, std::min(b, c), 1e-12);
            if (!r.finite) {
                fail(i, "bracket integral does not converge");
                continue;
            }
            w_int = r.value;
        }
        const double head = a > 0.0 ? (w.right_limit(a) - w(b)) * a : 0.0;
        const double size = head + w_int;
        out.max_bracket_integral = std::max(out.max_bracket_integral, size);
        if (!(size < partition.epsilon)) {
            std::ostringstream os;
            os << "bracket " << i << " has size " << size << " >= epsilon " << partition.epsilon;
            fail(i, os.str());
        }
    }

    std::vector<double> xs;
    xs.reserve(argument_points + t.size());
    for (std::size_t j = 0; j < argument_points; ++j) {
        xs.push_back(static_cast<double>(j) / static_cast<double>(argument_points - 1));
    }
    xs.insert(xs.end(), t.begin(), t.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> wx(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        wx[j] = w(xs[j]);
    }
    std::vector<double> w_right(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        w_right[i] = w.right_limit(t[i]);
    }

    for (double s : s_grid) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw std::invalid_argument("verify_brackets: s must lie in (0, 1]");
        }
        const auto i = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), s) - t.begin());
        const double a = t[i - 1];
        const double b = t[i];
        const double ws = w(s);
        const double wb = partition.w_values[i];
        auto check = [&](double x, double w_at_x) {
            const double member = x <= s ? ws : 0.0;
            const double lower = x <= a ? wb : 0.0;
            const double upper = x <= a ? w_right[i - 1] : (x <= b ? w_at_x : 0.0);
            return le_tol(lower, member) && le_tol(member, upper);
        };
        bool ok = check(s, ws);
        for (std::size_t j = 0; ok && j < xs.size(); ++j) {
            ok = check(xs[j], wx[j]);
        }
        if (!ok) {
            std::ostringstream os;
            os << "w_s with s = " << s << " escapes bracket " << i;
            fail(i, os.str());
        }
    }
    return out;
}

BracketInequality bracket_inequality_check(std::span<const double> uniforms,
                                           const DistributionModel& model,
                                           const WeightFunction& phi,
                                           const BracketPartition& partition) {
    if (uniforms.empty()) {
        throw std::invalid_argument("bracket_inequality_check: empty sample");
    }
    const BracketWeight w(model, phi);
    std::vector<double> xs(uniforms.size());
    for (std::size_t j = 0; j < uniforms.size(); ++j) {
        xs[j] = quantile_left(model, uniforms[j], 1.0 - uniforms[j]);
    }
    const EmpiricalDistribution edf(xs);

    BracketInequality out;
    out.lhs = weighted_sup_norm(edf, model, phi, kDefaultSupResolution, 0.0);

    std::vector<double> u(uniforms.begin(), uniforms.end());
    std::sort(u.begin(), u.end());
    const auto n = static_cast<double>(u.size());
    const auto& t = partition.t_points;
    double worst = -kInf;
    std::size_t below = 0;  // #{U_j <= a}
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = t[i - 1];
        const double b = t[i];
        while (below < u.size() && u[below] <= a) {
            ++below;
        }
        std::size_t k = below;
        double inside = 0.0;
        while (k < u.size() && u[k] <= b) {
            inside += w(u[k]);
            ++k;
        }
        const double g_a = static_cast<double>(below) / n;
        const double wa = a > 0.0 ? w.right_limit(a) : 0.0;
        const double wb = partition.w_values[i];
        const double u_dG = (below > 0 ? g_a * wa : 0.0) + inside / n;
        const double u_dI = a * wa + partition.w_integrals[i - 1];
        const double l_dG = wb * g_a;
        const double l_dI = wb * a;
        worst = std::max({worst, u_dG - u_dI, l_dI - l_dG});
    }
    out.rhs = worst + partition.epsilon;
    out.holds = out.lhs <= out.rhs;
    return out;
}

DistributionModel reflect_model(const DistributionModel& model) {
    switch (model.kind) {
        case DistributionKind::StdNormal:
            return model;
        case DistributionKind::ParetoTwoSided:
            return DistributionModel::pareto_two_sided(model.tail_alpha, model.x0, model.c2, model.c1);
        case DistributionKind::Uniform01:
            break;
    }
    throw std::invalid_argument("reflect_model: " + model.name + " has no reflected model");
}

WeightFunction reflect_weight(const WeightFunction& phi) {
    WeightFunction out = phi;
    if (phi.kind == WeightKind::AdaptiveGammaF && phi.base_model) {
        out.base_model = reflect_model(*phi.base_model);
    }
    out.x_phi = -phi.x_phi;
    return out;
}

std::vector<double> reflect_uniforms(std::span<const double> uniforms) {
    std::vector<double> out(uniforms.size());
    std::transform(uniforms.begin(), uniforms.end(), out.begin(), [](double u) { return 1.0 - u; });
    return out;
}

}  // namespace mzlaw
