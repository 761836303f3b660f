#pragma once

#include "mzlaw/distributions.hpp"
#include "mzlaw/weights.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mzlaw {

/// w(t) = phi(F^<-(t)) on [0, F(0)] and 0 after, for a weight that is
/// nonincreasing on the negative axis.
class BracketWeight {
public:
    BracketWeight(DistributionModel model, WeightFunction phi);

    [[nodiscard]] double operator()(double t) const;
    /// w(t+); zero from F(0) on, and the limit at the left support end for t = 0.
    [[nodiscard]] double right_limit(double t) const;
    /// F(0), the end of the nonzero part.
    [[nodiscard]] double cutoff() const { return cutoff_; }
    /// int_a^b w(t) dt by tanh-sinh quadrature.
    [[nodiscard]] double integral(double a, double b, double tol = 1e-11) const;

    [[nodiscard]] const DistributionModel& model() const { return model_; }
    [[nodiscard]] const WeightFunction& phi() const { return phi_; }

private:
    DistributionModel model_;
    WeightFunction phi_;
    double cutoff_;
    double limit_at_zero_;
};

/// Builds w after checking int phi dF < inf; throws ConditionViolation otherwise.
[[nodiscard]] BracketWeight bracket_weight(const DistributionModel& model, const WeightFunction& phi);

/// Partition 0 = t_0 < ... < t_m = 1 with brackets, for s in (t_{i-1}, t_i],
///   l_i = w(t_i) 1[0, t_{i-1}]
///   u_i = w(t_{i-1}+) on [0, t_{i-1}],  w on (t_{i-1}, t_i],  0 after
/// around w_s = w(s) 1[0, s]. The bracket size is
///   int (u_i - l_i) = (w(t_{i-1}+) - w(t_i)) t_{i-1} + int_{t_{i-1}}^{t_i} w.
struct BracketPartition {
    double epsilon = 0.0;
    std::vector<double> t_points;
    /// w(t_i); w_values[0] is the right limit at 0.
    std::vector<double> w_values;
    /// int (u_i - l_i) per bracket, as computed during construction.
    std::vector<double> bracket_integrals;
    /// int_{t_{i-1}}^{t_i} w per bracket.
    std::vector<double> w_integrals;
    std::size_t m = 0;
};

inline constexpr double kBracketSafety = 0.1;

/// Greedy partition: each t_i is pushed as far right as possible while the
/// bracket size stays below epsilon (1 - kBracketSafety). F(0) is always a
/// partition point; everything after it is one bracket of size 0.
[[nodiscard]] BracketPartition build_partition(const BracketWeight& w, double epsilon);

struct BracketVerification {
    bool holds = true;
    std::optional<std::size_t> offending_index;  // 1-based bracket index
    std::string reason;
    double max_bracket_integral = 0.0;
};

/// Re-integrates every bracket with Gauss-Kronrod and checks it against
/// epsilon, then checks l_i <= w_s <= u_i for each s in `s_grid` on
/// `argument_points` evenly spaced arguments in [0, 1] plus the partition
/// points and s itself.
[[nodiscard]] BracketVerification verify_brackets(const BracketPartition& partition,
                                                  const BracketWeight& w,
                                                  std::span<const double> s_grid,
                                                  std::size_t argument_points = 1000);

struct BracketInequality {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// With X_i = F^<-(U_i): lhs = sup_{x <= 0} |F_n(x) - F(x)| phi(x), and
/// rhs = max_i max(int u_i d(G_n - I), int l_i d(I - G_n)) + epsilon, where
/// G_n is the empirical law of the U_i and I the uniform law.
[[nodiscard]] BracketInequality bracket_inequality_check(std::span<const double> uniforms,
                                                         const DistributionModel& model,
                                                         const WeightFunction& phi,
                                                         const BracketPartition& partition);

/// Law of -X. Throws for Uniform01, whose mirror image is not a model.
[[nodiscard]] DistributionModel reflect_model(const DistributionModel& model);
/// phi(-x); the adaptive weight follows its reflected base law.
[[nodiscard]] WeightFunction reflect_weight(const WeightFunction& phi);
/// 1 - U_i, which realizes -X_i = (F reflected)^<-(1 - U_i).
[[nodiscard]] std::vector<double> reflect_uniforms(std::span<const double> uniforms);

}  // namespace mzlaw
