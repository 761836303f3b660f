#pragma once

#include <functional>
#include <vector>

namespace mzlaw::quad {

/// Integrals whose magnitude exceeds this are reported as divergent.
inline constexpr double kDivergenceCap = 1e8;

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimate reported by the rule
    double l1 = 0.0;      // integral of |f|
    bool finite = true;   // false if the rule hit a singular point or the cap
};

/// Integrand on the open unit interval that also receives the exact
/// complement `uc == 1 - u`. Quantile-type integrands need this to stay
/// accurate near u = 1.
using UnitIntegrand = std::function<double(double u, double uc)>;

/// Integral over (0,1) by double-exponential (tanh-sinh) quadrature.
/// Endpoint singularities are handled without evaluating at 0 or 1.
Result integrate_unit(const UnitIntegrand& f, double tol = 1e-10);

/// As integrate_unit, split at the given interior points (sorted or not)
/// so that kinks of the integrand fall on segment ends.
Result integrate_unit(const UnitIntegrand& f, std::vector<double> breaks, double tol = 1e-10);

/// Integral over (a, b); either bound may be infinite.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

/// Integral over (a, b) with adaptive 15-point Gauss-Kronrod. An
/// independent rule, used to cross-check tanh-sinh results.
Result integrate_gauss_kronrod(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10);

}  // namespace mzlaw::quad
