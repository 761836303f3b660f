#pragma once

#include "mzlaw/distributions.hpp"
#include "mzlaw/edf.hpp"

#include <span>
#include <stdexcept>
#include <string>

namespace mzlaw {

/// Raised when a law or kernel falls outside the class a functional is
/// defined on, or when a continuity condition does not hold.
class ConditionViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class LKernelKind { Identity, Power, Step };

/// Distribution function K on [0,1] defining L(F) = int x dK(F(x)).
///
///   Identity  K(u) = u                   (beta' = 0, C' = 1)
///   Power     K(u) = 1 - (1 - u)^beta    (beta' = 1 - beta, C' = 1)
///   Step      K(u) = 1{u >= y}           (no Lipschitz data)
///
/// (beta', C') bound the local Lipschitz constant: L(u) <= C' u^-beta' (1-u)^-beta'.
struct LKernel {
    LKernelKind kind = LKernelKind::Identity;
    double beta = 1.0;
    double y = 0.5;
    double lipschitz_beta_prime = 0.0;
    double lipschitz_Cprime = 1.0;

    static LKernel identity();
    static LKernel power(double beta);
    static LKernel step(double y);

    void validate() const;
    [[nodiscard]] bool has_lipschitz_data() const { return kind != LKernelKind::Step; }
    [[nodiscard]] double operator()(double u) const;
};

enum class VKernelKind { ProductCentered, HalfSquaredDiff, Product };

/// Kernel g of V(F) = int int g(x1, x2) dF(x1) dF(x2).
///
///   ProductCentered(mu)  (x1 - mu)(x2 - mu)   degenerate at F when mu = E[X]
///   HalfSquaredDiff      (x1 - x2)^2 / 2
///   Product              x1 x2
struct VKernel {
    VKernelKind kind = VKernelKind::HalfSquaredDiff;
    double mu = 0.0;
    bool symmetric = true;

    static VKernel product_centered(double mu);
    static VKernel half_squared_diff();
    static VKernel product();

    [[nodiscard]] double operator()(double x1, double x2) const;
};

/// Parameters of rho_{p,a}(X) = E[X] + a E[((X - E[X])^+)^p]^(1/p).
struct RiskParams {
    double p = 1.0;
    double a = 0.0;

    /// Throws unless p >= 1 and a in [0, 1].
    void validate() const;
};

/// Plug-in L-statistic sum_i x_(i) [K(i/n) - K((i-1)/n)].
[[nodiscard]] double l_statistic(const EmpiricalDistribution& edf, const LKernel& K);

/// L(F) = int_0^1 F^<-(u) dK(u). Identity and Power kernels are integrated
/// after the substitution u = K^-1(v), which removes the density singularity
/// of dK at u = 1. Throws ConditionViolation if int |F^<-| dK diverges.
[[nodiscard]] double l_functional_exact(const DistributionModel& model, const LKernel& K,
                                        double tol = 1e-10);

/// C' * int F^-beta' (1-F)^-beta' / phi_{gamma,F} dx over the interior of the
/// support; the constant for which |L(G) - L(F)| <= C ||G - F||_{phi_{gamma,F}}.
///
/// Requires beta' < gamma <= 1 and int_{x<0} F^(gamma-beta') + int_{x>=0}
/// (1-F)^(gamma-beta') < inf; for the Pareto model the latter is the exact
/// test gamma > beta' + 1/alpha. Throws ConditionViolation otherwise and
/// std::invalid_argument for a kernel without Lipschitz data.
[[nodiscard]] double holder_constant(const DistributionModel& model, const LKernel& K, double gamma,
                                     double tol = 1e-10);

/// Full double sum (1/n^2) sum_i sum_j g(x_i, x_j); symmetric kernels visit
/// each off-diagonal pair once and double it. O(n^2).
[[nodiscard]] double v_statistic(const EmpiricalDistribution& edf, const VKernel& g);

/// The same statistic in O(n) through the kernel's moment expansion. All
/// built-in kernels are polynomials of degree one in each argument.
[[nodiscard]] double v_statistic_moments(std::span<const double> sample, const VKernel& g);

/// V(F) from the model's mean and variance; +inf when they do not exist.
[[nodiscard]] double v_functional_exact(const DistributionModel& model, const VKernel& g);

/// Plug-in rho_{p,a} with sample means. Throws on an empty sample.
[[nodiscard]] double risk_one_sided(std::span<const double> sample, const RiskParams& params);

/// rho_{p,a}(F) by quadrature. Throws ConditionViolation without a p-th moment.
[[nodiscard]] double risk_one_sided_exact(const DistributionModel& model, const RiskParams& params,
                                          double tol = 1e-10);

/// Power kernel whose Lipschitz data (beta' = 1 - 1/p, C' = 1 + a) bounds
/// every kernel in the L-representation of rho_{p,a}.
[[nodiscard]] LKernel risk_lipschitz_kernel(const RiskParams& params);

struct ChainCheck {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// (1-x) + a((1-x) x^p)^(1/p) <= (1+a)(1-x)^(1/p), the value of rho_{p,a} at
/// a Bernoulli(1-x) law against the Power-kernel envelope. Both sides are
/// compared with a 4-ulp allowance. Throws unless x is in [0, 1].
[[nodiscard]] ChainCheck bernoulli_chain_check(double x, const RiskParams& params);

}  // namespace mzlaw
