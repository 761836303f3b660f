#include "mzlaw/functionals.hpp"

#include "detail/summation.hpp"
#include "mzlaw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace mzlaw {

namespace {

using detail::CompensatedSum;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Maps v in (0,1) with exact complement vc to u = K^-1(v) for the Power
// kernel and returns (u, 1 - u).
std::pair<double, double> power_inverse(double beta, double v, double vc) {
    const double log_vc = v < 0.5 ? std::log1p(-v) : std::log(vc);
    const double e = log_vc / beta;
    return {-std::expm1(e), std::exp(e)};
}

// Integral of f over (a, b) with a, b finite, or over a Pareto tail by the
// substitution x = 1/t, which turns an algebraic tail into an integrable
// endpoint singularity on a bounded interval.
quad::Result integrate_piece(const std::function<double(double)>& f, double a, double b,
                             double tol) {
    if (std::isfinite(a) && std::isfinite(b)) {
        return quad::integrate(f, a, b, tol);
    }
    if (std::isinf(b) && a > 0) {
        return quad::integrate(
            [&f](double t) {
                const double t2 = t * t;
                return t2 > 0.0 ? f(1.0 / t) / t2 : 0.0;
            },
            0.0, 1.0 / a, tol);
    }
    if (std::isinf(a) && b < 0) {
        return quad::integrate(
            [&f](double t) {
                const double t2 = t * t;
                return t2 > 0.0 ? f(-1.0 / t) / t2 : 0.0;
            },
            0.0, -1.0 / b, tol);
    }
    return quad::integrate(f, a, b, tol);
}

// Interior pieces of the support, split at 0 and at the bridge ends.
std::vector<std::pair<double, double>> support_pieces(const DistributionModel& model) {
    switch (model.kind) {
        case DistributionKind::Uniform01:
            return {{0.0, 1.0}};
        case DistributionKind::StdNormal:
            return {{-kInf, 0.0}, {0.0, kInf}};
        case DistributionKind::ParetoTwoSided:
            return {{-kInf, -model.x0}, {-model.x0, 0.0}, {0.0, model.x0}, {model.x0, kInf}};
    }
    return {};
}

// Levels in (0,1) where the quantile function of the model has a kink.
std::vector<double> quantile_kinks(const DistributionModel& model) {
    if (model.kind == DistributionKind::ParetoTwoSided) {
        return {model.bridge_lower(), 0.5, model.bridge_upper()};
    }
    return {};
}

}  // namespace

LKernel LKernel::identity() {
    LKernel k;
    k.kind = LKernelKind::Identity;
    k.beta = 1.0;
    k.lipschitz_beta_prime = 0.0;
    k.lipschitz_Cprime = 1.0;
    return k;
}

LKernel LKernel::power(double beta) {
    LKernel k;
    k.kind = LKernelKind::Power;
    k.beta = beta;
    k.lipschitz_beta_prime = 1.0 - beta;
    k.lipschitz_Cprime = 1.0;
    k.validate();
    return k;
}

LKernel LKernel::step(double y) {
    LKernel k;
    k.kind = LKernelKind::Step;
    k.y = y;
    k.validate();
    return k;
}

void LKernel::validate() const {
    switch (kind) {
        case LKernelKind::Identity:
            break;
        case LKernelKind::Power:
            if (!(beta > 0.0 && beta <= 1.0)) {
                throw std::invalid_argument("power kernel needs beta in (0, 1], got " + fmt(beta));
            }
            break;
        case LKernelKind::Step:
            if (!(y > 0.0 && y <= 1.0)) {
                throw std::invalid_argument("step kernel needs y in (0, 1], got " + fmt(y));
            }
            return;
    }
    if (!(lipschitz_beta_prime >= 0.0 && lipschitz_beta_prime < 1.0)) {
        throw std::invalid_argument("beta' must lie in [0, 1)");
    }
    if (!(lipschitz_Cprime > 0.0) || !std::isfinite(lipschitz_Cprime)) {
        throw std::invalid_argument("C' must be positive and finite");
    }
}

double LKernel::operator()(double u) const {
    if (u <= 0.0) {
        return 0.0;
    }
    if (u >= 1.0) {
        return 1.0;
    }
    switch (kind) {
        case LKernelKind::Identity:
            return u;
        case LKernelKind::Power:
            return -std::expm1(beta * std::log1p(-u));
        case LKernelKind::Step:
            return u >= y ? 1.0 : 0.0;
    }
    return 0.0;
}

VKernel VKernel::product_centered(double mu) {
    VKernel g;
    g.kind = VKernelKind::ProductCentered;
    g.mu = mu;
    return g;
}

VKernel VKernel::half_squared_diff() {
    VKernel g;
    g.kind = VKernelKind::HalfSquaredDiff;
    return g;
}

VKernel VKernel::product() {
    VKernel g;
    g.kind = VKernelKind::Product;
    return g;
}

double VKernel::operator()(double x1, double x2) const {
    switch (kind) {
        case VKernelKind::ProductCentered:
            return (x1 - mu) * (x2 - mu);
        case VKernelKind::HalfSquaredDiff: {
            const double d = x1 - x2;
            return 0.5 * d * d;
        }
        case VKernelKind::Product:
            return x1 * x2;
    }
    return 0.0;
}

void RiskParams::validate() const {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("risk parameter p must be >= 1, got " + fmt(p));
    }
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("risk parameter a must lie in [0, 1], got " + fmt(a));
    }
}

double l_statistic(const EmpiricalDistribution& edf, const LKernel& K) {
    K.validate();
    const auto xs = edf.sorted_values();
    const std::size_t n = xs.size();
    switch (K.kind) {
        case LKernelKind::Identity:
            return detail::compensated_mean(xs);
        case LKernelKind::Step:
            return quantile_left(edf, K.y);
        case LKernelKind::Power: {
            // K(i/n) - K((i-1)/n) = ((n-i+1)^beta - (n-i)^beta) / n^beta
            const double nd = static_cast<double>(n);
            const double scale = std::pow(nd, -K.beta);
            CompensatedSum s;
            double upper = std::pow(nd, K.beta);
            for (std::size_t i = 1; i <= n; ++i) {
                const double lower = std::pow(static_cast<double>(n - i), K.beta);
                s.add(xs[i - 1] * (upper - lower));
                upper = lower;
            }
            return s.value() * scale;
        }
    }
    return 0.0;
}

double l_functional_exact(const DistributionModel& model, const LKernel& K, double tol) {
    model.validate();
    K.validate();
    if (K.kind == LKernelKind::Step) {
        const double q = quantile_left(model, K.y);
        if (!std::isfinite(q)) {
            throw ConditionViolation("step kernel at y = 1 has an infinite quantile");
        }
        return q;
    }
    if (model.kind == DistributionKind::ParetoTwoSided) {
        // Left tail needs alpha > 1; near u = 1, F^<-(u) dK(u) behaves like
        // (1-u)^(beta - 1 - 1/alpha).
        const double inv_alpha = 1.0 / model.tail_alpha;
        if (!(inv_alpha < 1.0 && K.beta > inv_alpha)) {
            throw ConditionViolation("Pareto(alpha=" + fmt(model.tail_alpha) +
                                     ") is outside the domain of the kernel (beta=" +
                                     fmt(K.beta) + ")");
        }
    }
    const double beta = K.kind == LKernelKind::Identity ? 1.0 : K.beta;
    auto integrand = [&model, beta](double v, double vc) {
        if (beta == 1.0) {
            return quantile_left(model, v, vc);
        }
        const auto [u, uc] = power_inverse(beta, v, vc);
        if (!(u > 0.0) || !(uc > 0.0)) {
            return 0.0;
        }
        return quantile_left(model, u, uc);
    };
    std::vector<double> breaks;
    for (double u : quantile_kinks(model)) {
        breaks.push_back(beta == 1.0 ? u : -std::expm1(beta * std::log1p(-u)));
    }
    const quad::Result r = quad::integrate_unit(integrand, breaks, tol);
    if (!r.finite) {
        throw ConditionViolation("int |F^<-| dK diverges for " + model.name);
    }
    return r.value;
}

double holder_constant(const DistributionModel& model, const LKernel& K, double gamma,
                       double tol) {
    model.validate();
    K.validate();
    if (!K.has_lipschitz_data()) {
        throw std::invalid_argument("step kernel has no Lipschitz data");
    }
    const double bp = K.lipschitz_beta_prime;
    if (!(gamma > bp && gamma <= 1.0)) {
        throw ConditionViolation("need beta' < gamma <= 1, got beta'=" + fmt(bp) +
                                 " gamma=" + fmt(gamma));
    }
    if (model.kind == DistributionKind::ParetoTwoSided &&
        !(gamma - bp > 1.0 / model.tail_alpha)) {
        throw ConditionViolation("Pareto tails need gamma - beta' > 1/alpha, got " +
                                 fmt(gamma - bp) + " <= " + fmt(1.0 / model.tail_alpha));
    }
    auto integrand = [&model, bp, gamma](double x) {
        const double F = cdf_eval(model, x);
        const double S = survival_eval(model, x);
        if (!(F > 0.0) || !(S > 0.0)) {
            return 0.0;
        }
        if (x < 0.0) {
            return std::pow(F, gamma - bp) * std::pow(S, -bp);
        }
        return std::pow(F, -bp) * std::pow(S, gamma - bp);
    };
    CompensatedSum total;
    for (const auto& [a, b] : support_pieces(model)) {
        const quad::Result r = integrate_piece(integrand, a, b, tol);
        if (!r.finite) {
            throw ConditionViolation("Hölder integral diverges for " + model.name);
        }
        total.add(r.value);
    }
    return K.lipschitz_Cprime * total.value();
}

double v_statistic(const EmpiricalDistribution& edf, const VKernel& g) {
    const auto xs = edf.sorted_values();
    const std::size_t n = xs.size();
    CompensatedSum s;
    if (g.symmetric) {
        for (std::size_t i = 0; i < n; ++i) {
            s.add(g(xs[i], xs[i]));
            CompensatedSum row;
            for (std::size_t j = i + 1; j < n; ++j) {
                row.add(g(xs[i], xs[j]));
            }
            s.add(2.0 * row.value());
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                s.add(g(xs[i], xs[j]));
            }
        }
    }
    const double nd = static_cast<double>(n);
    return s.value() / (nd * nd);
}

double v_statistic_moments(std::span<const double> sample, const VKernel& g) {
    if (sample.empty()) {
        throw std::invalid_argument("v_statistic_moments: empty sample");
    }
    const double m = detail::compensated_mean(sample);
    switch (g.kind) {
        case VKernelKind::Product:
            return m * m;
        case VKernelKind::ProductCentered: {
            const double d = m - g.mu;
            return d * d;
        }
        case VKernelKind::HalfSquaredDiff: {
            CompensatedSum s;
            for (double x : sample) {
                s.add((x - m) * (x - m));
            }
            return s.value() / static_cast<double>(sample.size());
        }
    }
    return 0.0;
}

double v_functional_exact(const DistributionModel& model, const VKernel& g) {
    const double m = model_mean(model);
    switch (g.kind) {
        case VKernelKind::Product:
            return std::isfinite(m) ? m * m : kInf;
        case VKernelKind::ProductCentered:
            return std::isfinite(m) ? (m - g.mu) * (m - g.mu) : kInf;
        case VKernelKind::HalfSquaredDiff:
            return model_variance(model);
    }
    return kInf;
}

double risk_one_sided(std::span<const double> sample, const RiskParams& params) {
    params.validate();
    if (sample.empty()) {
        throw std::invalid_argument("risk_one_sided: empty sample");
    }
    const double m = detail::compensated_mean(sample);
    CompensatedSum s;
    for (double x : sample) {
        const double d = x - m;
        if (d > 0.0) {
            s.add(params.p == 1.0 ? d : std::pow(d, params.p));
        }
    }
    const double moment = s.value() / static_cast<double>(sample.size());
    double dev = moment;
    if (params.p == 2.0) {
        dev = std::sqrt(moment);
    } else if (params.p != 1.0) {
        dev = std::pow(moment, 1.0 / params.p);
    }
    return m + params.a * dev;
}

double risk_one_sided_exact(const DistributionModel& model, const RiskParams& params, double tol) {
    params.validate();
    const double m = model_mean(model);
    if (!std::isfinite(m) ||
        (model.kind == DistributionKind::ParetoTwoSided && !(params.p < model.tail_alpha))) {
        throw ConditionViolation(model.name + " has no moment of order " + fmt(params.p));
    }
    auto integrand = [&model, &params, m](double u, double uc) {
        const double d = quantile_left(model, u, uc) - m;
        return d > 0.0 ? std::pow(d, params.p) : 0.0;
    };
    std::vector<double> breaks = quantile_kinks(model);
    breaks.push_back(cdf_eval(model, m));
    const quad::Result r = quad::integrate_unit(integrand, breaks, tol);
    if (!r.finite) {
        throw ConditionViolation("upper semideviation diverges for " + model.name);
    }
    return m + params.a * std::pow(r.value, 1.0 / params.p);
}

LKernel risk_lipschitz_kernel(const RiskParams& params) {
    params.validate();
    LKernel k = LKernel::power(1.0 / params.p);
    k.lipschitz_Cprime = 1.0 + params.a;
    return k;
}

ChainCheck bernoulli_chain_check(double x, const RiskParams& params) {
    params.validate();
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("bernoulli_chain_check: x must lie in [0, 1]");
    }
    const double q = 1.0 - x;
    ChainCheck c;
    c.lhs = q + params.a * std::pow(q * std::pow(x, params.p), 1.0 / params.p);
    c.rhs = (1.0 + params.a) * std::pow(q, 1.0 / params.p);
    const double eps = std::numeric_limits<double>::epsilon();
    c.holds = c.lhs <= c.rhs + 4.0 * eps * std::max(1.0, c.rhs);
    return c;
}

}  // namespace mzlaw
