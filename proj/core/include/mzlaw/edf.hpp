#pragma once

#include "mzlaw/distributions.hpp"
#include "mzlaw/weights.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mzlaw {

/// Step function F_n(x) = #{i : x_i <= x} / n over a sorted copy of a sample.
class EmpiricalDistribution {
public:
    /// Throws std::invalid_argument on an empty sample or NaN entries.
    explicit EmpiricalDistribution(std::span<const double> sample);

    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }
    [[nodiscard]] std::span<const double> sorted_values() const noexcept { return sorted_; }

    /// F_n(x).
    [[nodiscard]] double operator()(double x) const;
    /// F_n(x-).
    [[nodiscard]] double left_limit(double x) const;

    /// x_(k), 1-based.
    [[nodiscard]] double order_statistic(std::size_t k) const { return sorted_.at(k - 1); }

private:
    std::vector<double> sorted_;
};

[[nodiscard]] EmpiricalDistribution build_edf(std::span<const double> sample);

/// inf{x : F_n(x) >= y}: -inf for y <= 0, x_(ceil(n y)) for y in (0, 1], +inf above 1.
/// ceil(n y) is taken on the exact product of n and the double y.
[[nodiscard]] double quantile_left(const EmpiricalDistribution& edf, double y);

/// x_(ceil(n y)). Throws std::invalid_argument unless y is in (0, 1].
[[nodiscard]] double edf_quantile(const EmpiricalDistribution& edf, double y);

inline constexpr std::size_t kDefaultSupResolution = 8;

/// sup_x |F_n(x) - F(x)| phi(x), optionally restricted to x <= x_upper.
///
/// Candidates: every distinct sample point and its left limit, the trough
/// x_phi (and its left limit), and a grid of `resolution` points per gap
/// between jumps, spaced evenly in F-scale. The best interior grid points are
/// polished by golden-section search. Tail gaps are cut at the point beyond
/// which F*phi (resp. (1-F)*phi) is monotone for the given (model, weight)
/// pair, so the far tails reduce to one candidate. Exact for the constant
/// weight, where only jump points matter.
///
/// Returns +inf when the weighted tail itself is unbounded (polynomial
/// weight heavier than the Pareto tail). Throws if resolution == 0.
[[nodiscard]] double weighted_sup_norm(const EmpiricalDistribution& edf,
                                       const DistributionModel& model, const WeightFunction& w,
                                       std::size_t resolution = kDefaultSupResolution,
                                       double x_upper = kInf);

/// |F_n(x) - F(x)| phi(x) at a single point, with 0 * inf read as 0.
[[nodiscard]] double weighted_deviation_at(const EmpiricalDistribution& edf,
                                           const DistributionModel& model,
                                           const WeightFunction& w, double x);

}  // namespace mzlaw
