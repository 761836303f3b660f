#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mzlaw {

/// +infinity doubles as the `inf{} = +inf` sentinel of left-continuous
/// inverses. Reports serialize it as the string "inf".
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class DistributionKind { Uniform01, StdNormal, ParetoTwoSided };

/// A target law F with closed-form CDF and quantile.
///
/// ParetoTwoSided has tails F(x) = c1 |x|^-alpha for x <= -x0 and
/// 1 - F(x) = c2 x^-alpha for x >= x0, joined by a linear bridge on
/// [-x0, x0]. The bridge exists iff (c1 + c2) x0^-alpha < 1.
struct DistributionModel {
    DistributionKind kind = DistributionKind::Uniform01;
    double tail_alpha = 0.0;
    double x0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::string name = "uniform01";

    static DistributionModel uniform01();
    static DistributionModel std_normal();
    /// Throws std::invalid_argument if the parameters admit no bridge.
    static DistributionModel pareto_two_sided(double alpha, double x0, double c1, double c2);

    void validate() const;

    /// F(-x0) and F(x0); only meaningful for ParetoTwoSided.
    [[nodiscard]] double bridge_lower() const { return c1 * tail_pow(); }
    [[nodiscard]] double bridge_upper() const { return 1.0 - c2 * tail_pow(); }

    /// Closed support [a, b] (possibly infinite).
    [[nodiscard]] std::pair<double, double> support() const;

    bool operator==(const DistributionModel&) const = default;

private:
    [[nodiscard]] double tail_pow() const;
};

[[nodiscard]] double cdf_eval(const DistributionModel& model, double x);

/// 1 - F(x), evaluated without cancellation in the right tail.
[[nodiscard]] double survival_eval(const DistributionModel& model, double x);

/// F^<-(y) = inf{x : F(x) >= y}; -inf for y <= 0 and +inf when the set is empty.
[[nodiscard]] double quantile_left(const DistributionModel& model, double y);

/// Same as above with the exact complement yc = 1 - y supplied by the caller,
/// which keeps the right tail accurate when y is within rounding of 1.
[[nodiscard]] double quantile_left(const DistributionModel& model, double y, double yc);

/// inf{x in [lo, hi] : H(x) >= y} for a nondecreasing callable, by bisection.
/// Returns +inf if H(hi) < y and lo if H(lo) >= y.
[[nodiscard]] double quantile_left(const std::function<double(double)>& H, double y, double lo,
                                   double hi);

enum class Monotonicity { Nonincreasing, Nondecreasing };

/// A monotone function known only on a finite grid. Between grid points the
/// function is read as a right-continuous step: h(x) = values[i] on
/// [grid[i], grid[i+1]), values.front() before the grid, values.back() after it.
struct MonotoneFunctionSamples {
    std::vector<double> grid;
    std::vector<double> values;
    Monotonicity direction = Monotonicity::Nonincreasing;

    void validate() const;
};

/// h^->(y) = sup{x >= 0 : h(x) > y}, with sup{} = 0, for a nonincreasing h.
/// Exact for the step reading of the samples; +inf if h stays above y past the grid.
[[nodiscard]] double inverse_right(const MonotoneFunctionSamples& h, double y);

/// Same for a nonincreasing callable on [0, inf), by bisection. Values beyond
/// `x_max` count as +inf.
[[nodiscard]] double inverse_right(const std::function<double(double)>& h, double y,
                                   double x_max = 1e300);

/// n draws X_i = F^<-(U_i) with U_i from UniformStream(seed). Throws on n == 0.
[[nodiscard]] std::vector<double> sample_iid(const DistributionModel& model, std::size_t n,
                                             std::uint64_t seed);

/// Mean and variance of the model, or +inf where the moment does not exist.
[[nodiscard]] double model_mean(const DistributionModel& model);
[[nodiscard]] double model_variance(const DistributionModel& model);

/// "inf" / "-inf" for the sentinels, shortest round-trip decimal otherwise.
[[nodiscard]] std::string format_extended(double value);

}  // namespace mzlaw
