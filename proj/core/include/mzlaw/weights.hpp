#pragma once

#include "mzlaw/distributions.hpp"

#include <optional>
#include <string>

namespace mzlaw {

enum class WeightKind { Uniform, Poly, AdaptiveGammaF };

/// A u-shaped weight bounded below by `eps_lower`: nonincreasing on
/// (-inf, x_phi], nondecreasing on [x_phi, inf).
///
///   Uniform         phi(x) = 1
///   Poly            phi(x) = (1 + |x|)^lambda
///   AdaptiveGammaF  phi(x) = F(x)^-gamma for x < 0, (1 - F(x))^-gamma for x >= 0
///
/// The adaptive weight is held constant outside the open support of F, taking
/// the one-sided limit at the support boundary (which may be +inf).
struct WeightFunction {
    WeightKind kind = WeightKind::Uniform;
    double lambda = 0.0;
    double gamma = 1.0;
    std::optional<DistributionModel> base_model;
    double x_phi = 0.0;
    double eps_lower = 1.0;

    static WeightFunction uniform();
    /// Throws if lambda < 0.
    static WeightFunction poly(double lambda);

    void validate() const;
};

[[nodiscard]] double weight_eval(const WeightFunction& w, double x);

/// lim_{y -> x-} phi(y). Differs from weight_eval only for the adaptive
/// weight at x = 0, where the two branches meet.
[[nodiscard]] double weight_left_limit(const WeightFunction& w, double x);

/// phi_{gamma,F}. Throws std::invalid_argument unless gamma is in (0, 1].
[[nodiscard]] WeightFunction make_adaptive_weight(const DistributionModel& model, double gamma);

struct IntegrabilityVerdict {
    bool holds = false;
    double integral = 0.0;    // +inf when the integral diverges
    std::string certificate;  // how the verdict was reached
};

/// Checks int phi(x)^(1/(1-r)) dF(x) < inf, computed on the unit interval as
/// int_0^1 w(s)^(1/(1-r)) ds with w(s) = phi(F^<-(s)).
///
/// Tail exponents are decided analytically where the pair (model, weight)
/// allows it; the value itself comes from quadrature, and a quadrature value
/// beyond quad::kDivergenceCap also counts as divergence.
/// Throws std::invalid_argument unless r is in [0, 1/2).
[[nodiscard]] IntegrabilityVerdict theorem1_integrability(const DistributionModel& model,
                                                          const WeightFunction& w, double r);

}  // namespace mzlaw
