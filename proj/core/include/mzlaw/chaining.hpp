#pragma once

#include "mzlaw/mixing.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mzlaw {

/// Threshold t = num / den with 0 <= num <= den, den > 0.
struct RationalThreshold {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Exact test u <= num / den for a double u.
[[nodiscard]] bool le_rational(double u, const RationalThreshold& t);

/// Z_{p,q}(t) = |sum_{i=p+1}^{p+q} (1{U_i <= t} - t)|. Throws if p + q
/// exceeds the sample length.
[[nodiscard]] double z_statistic(std::span<const double> uniforms, std::size_t p, std::size_t q,
                                 double t);

/// den * Z_{p,q}(num/den) = |den * count - q * num|, in exact integer arithmetic.
[[nodiscard]] std::int64_t z_statistic_scaled(std::span<const double> uniforms, std::size_t p,
                                              std::size_t q, const RationalThreshold& t);

/// sup over t in [0,1] of Z_{p,q}(t). Between window order statistics Z is
/// linear in t, so the supremum is attained at an order statistic or as its
/// left limit.
[[nodiscard]] double z_sup(std::span<const double> uniforms, std::size_t p, std::size_t q);

struct DyadicBlock {
    std::size_t start = 0;
    std::size_t length = 0;
    /// 0 for the base block [0, 2^N); otherwise the bit index with length 2^(j-1).
    unsigned j = 0;
    /// start = 2^N + b * 2^j, when such an integer exists.
    std::optional<std::size_t> b;
};

struct DyadicDecomposition {
    std::size_t n = 0;
    unsigned N = 0;
    /// h[j-1] = h_j in n = 2^N + sum_j h_j 2^(j-1), j = 1..N.
    std::vector<int> h;
    std::vector<DyadicBlock> blocks;

    /// Throws std::logic_error if an invariant is violated.
    void validate() const;
};

/// Base block [0, 2^N) followed by one block per set bit, largest first.
[[nodiscard]] DyadicDecomposition dyadic_blocks(std::size_t n);

struct ChainingCheck {
    bool holds = true;
    /// min over t of (blockwise sum - Z_{0,n}(t)).
    double min_slack = 0.0;
    /// Slack per grid point, exact up to the final division by den.
    std::vector<double> slack;
};

/// Compares Z_{0,n}(t) with the sum of Z over the dyadic blocks of [0, n) at
/// every t in the grid, which must be increasing. Exact integer arithmetic.
[[nodiscard]] ChainingCheck chaining_bound_check(std::span<const double> uniforms, std::size_t n,
                                                 std::span<const RationalThreshold> t_grid);

/// k/m for k = 0..m.
[[nodiscard]] std::vector<RationalThreshold> uniform_threshold_grid(std::int64_t m);

/// (1/x^2)(1 + 4 sum_{i=0}^{q-1} alpha(i))(2 + log q)^2, unclipped.
[[nodiscard]] double rio_tail_bound(std::size_t q, double x, const MixingRateModel& rate);

/// Fraction of replications with q^-1/2 sup_t Z_{0,q}(t) >= x for each x,
/// from i.i.d. uniforms; replication k uses derive_seed(master_seed, k).
[[nodiscard]] std::vector<double> empirical_exceedance(std::size_t q, std::span<const double> xs,
                                                       std::size_t replications,
                                                       std::uint64_t master_seed);

}  // namespace mzlaw
