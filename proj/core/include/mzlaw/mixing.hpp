#pragma once

#include "mzlaw/distributions.hpp"
#include "mzlaw/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mzlaw {

/// Truncated causal linear process X_t = sum_{s=0}^{M} a_s Z_{t-s} with
/// a_0 = 1 and a_s = s^-gamma.
struct LinearProcessSpec {
    double gamma = 3.5;
    std::size_t truncation = 1000;
    DistributionModel innovation = DistributionModel::std_normal();
    double p_moment = 2.0;

    void validate() const;
    [[nodiscard]] std::vector<double> coefficients() const;
    /// Upper bound M^(1-gamma) / (gamma - 1) on the discarded sum_{s>M} a_s.
    [[nodiscard]] double truncation_tail_bound() const;
    /// True when the discarded tail exceeds 1e-8.
    [[nodiscard]] bool truncation_warning() const;
};

/// n values of the process from n + M innovations drawn with UniformStream(seed).
[[nodiscard]] std::vector<double> simulate_linear_process(const LinearProcessSpec& spec,
                                                          std::size_t n, std::uint64_t seed);

/// Same convolution over caller-supplied innovations Z_{1-M}, ..., Z_n
/// (n + M values, oldest first).
[[nodiscard]] std::vector<double> simulate_linear_process(const LinearProcessSpec& spec,
                                                          std::span<const double> innovations);

/// (p(gamma - 1) - 2) / (1 + p). Throws unless gamma > (2 + p) / p.
[[nodiscard]] double theta_bound(double p, double gamma);

/// (3 + 2p) / p, the decay exponent giving theta = 1.
[[nodiscard]] double gamma_for_theta_one(double p);

enum class MixingRateKind { PowerLaw, Zero };

/// Upper model for alpha-mixing coefficients: alpha(0) = 1/4, and for n >= 1
/// alpha(n) = min(1/4, K n^-theta) (PowerLaw) or 0 (Zero).
struct MixingRateModel {
    MixingRateKind kind = MixingRateKind::PowerLaw;
    double K_const = 1.0;
    double theta = 1.0;

    static MixingRateModel power_law(double K, double theta);
    static MixingRateModel zero();

    void validate() const;
    [[nodiscard]] double alpha(std::size_t n) const;
    /// sup{x >= 1 : alpha(floor(x)) > y}, or 0 if no lag n >= 1 has alpha(n) > y.
    [[nodiscard]] double alpha_inverse_right(double y) const;
};

struct T3Verdict {
    bool holds = false;
    double integral = 0.0;
    std::string certificate;
};

/// int_0^1 log(1 + alpha^->(s/2)) Gbar^->(s) ds, where Gbar is the tail of
/// phi(X_1). Evaluated as a sum over lags of log((m+2)/(m+1)) times
/// int_0^{2 alpha(m)} Gbar^->; the condition fails when a quadrature does
/// not converge at s = 0 or the value exceeds the divergence cap.
[[nodiscard]] T3Verdict condition_T3_check(const MixingRateModel& rate,
                                           const MonotoneFunctionSamples& phiX_tail,
                                           double tol = 1e-10);

/// Same with Gbar^-> given directly as a callable on (0, 1).
[[nodiscard]] T3Verdict condition_T3_check(const MixingRateModel& rate,
                                           const std::function<double(double)>& gbar_inverse,
                                           double tol = 1e-10);

/// Gbar(x) = P(phi(X) > x) for X ~ model, in closed form through the level
/// sets of the weight. Requires a continuous model.
[[nodiscard]] std::function<double(double)> phi_tail_survival(const DistributionModel& model,
                                                              const WeightFunction& w);

/// Gbar^->(s) = sup{x >= 0 : Gbar(x) > s} for the law of phi(X).
[[nodiscard]] std::function<double(double)> phi_tail_inverse(const DistributionModel& model,
                                                             const WeightFunction& w);

struct OpenInterval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] bool empty() const { return !(lo < hi); }
};

struct FeasibilityWindow {
    /// gamma range (beta' + 1/alpha, 1 - r) for the rate statement.
    std::optional<OpenInterval> rate_window;
    /// gamma range (beta' + 1/alpha, 1) for the strong law without rate.
    std::optional<OpenInterval> slln_window;
};

/// Admissible weight exponents gamma for Pareto-tailed data under a
/// Power-type kernel. Throws unless alpha > 0, beta' in [0,1), r in [0, 1/2).
[[nodiscard]] FeasibilityWindow feasibility_window(double alpha, double beta_prime, double r);

/// Gaussian AR(1) with unit marginal variance:
/// X_1 ~ N(0,1), X_t = rho X_{t-1} + sqrt(1 - rho^2) Z_t.
[[nodiscard]] std::vector<double> simulate_ar1(double rho, std::size_t n, std::uint64_t seed);

}  // namespace mzlaw
