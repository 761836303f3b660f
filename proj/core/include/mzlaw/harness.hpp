#pragma once

#include "mzlaw/distributions.hpp"
#include "mzlaw/functionals.hpp"
#include "mzlaw/mixing.hpp"
#include "mzlaw/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mzlaw {

enum class GeneratorKind { Iid, LinearProcess, AR1 };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Iid;
    DistributionModel model = DistributionModel::uniform01();
    LinearProcessSpec linear;
    double rho = 0.0;

    static GeneratorSpec iid(DistributionModel model);
    static GeneratorSpec linear_process(LinearProcessSpec spec);
    static GeneratorSpec ar1(double rho);

    void validate() const;
    /// Marginal law of each X_t. The linear process is rescaled by
    /// (sum a_s^2)^-1/2 so that Gaussian innovations give a N(0,1) marginal.
    [[nodiscard]] DistributionModel marginal() const;
    [[nodiscard]] std::vector<double> simulate(std::size_t n, std::uint64_t seed) const;
};

enum class FunctionalKind { LFunctional, VFunctional, Risk };

struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::LFunctional;
    LKernel l_kernel = LKernel::identity();
    VKernel v_kernel = VKernel::half_squared_diff();
    RiskParams risk;

    /// T(F) for the configured functional.
    [[nodiscard]] double exact(const DistributionModel& model) const;
    /// T(F_n) from a sample; V-statistics use the O(n) moment form.
    [[nodiscard]] double plug_in(std::span<const double> sample) const;
};

struct ExperimentConfig {
    GeneratorSpec generator;
    WeightFunction weight = WeightFunction::uniform();
    /// Empty: D_n is the weighted sup-norm distance. Otherwise |T(F_n) - T(F)|.
    std::optional<FunctionalSpec> functional;
    double r_exponent = 0.0;
    std::vector<std::size_t> n_grid;
    std::size_t replications = 1;
    std::uint64_t master_seed = 0;
    std::size_t sup_resolution = 8;
    std::string output_path;

    void validate() const;
};

struct SummaryStats {
    double median = 0.0;
    double mean = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
};

/// Type-7 sample quantiles and the mean. Throws on an empty input.
[[nodiscard]] SummaryStats summarize(std::span<const double> values);

struct PerNStats {
    std::size_t n = 0;
    SummaryStats raw;     // D_n
    SummaryStats scaled;  // n^r D_n
    std::vector<double> values;  // D_n per replication, in replication order
};

struct RateFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
};

/// OLS fit of log(median) on log(n). Throws with fewer than three points or
/// a nonpositive median.
[[nodiscard]] RateFit estimate_rate(std::span<const double> n_values,
                                    std::span<const double> medians);

struct RateReport {
    std::vector<PerNStats> per_n;
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    double r_exponent = 0.0;
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::string> warnings;

    [[nodiscard]] bool all_pass() const;
};

/// Replication k simulates one path of length max(n_grid) from seed
/// derive_seed(master_seed, k) and evaluates D_n on each prefix. Verdicts:
///   median_scaled_decreasing  median of n^r D_n strictly decreasing along the grid
///   slope_exceeds_r           fitted slope < -r
/// Condition-check failures are reported in `warnings`.
[[nodiscard]] RateReport run_experiment(const ExperimentConfig& cfg);

struct HolderReport {
    double constant = 0.0;
    double fraction = 0.0;
    std::size_t checks = 0;
    std::vector<std::size_t> n_grid;
    std::vector<double> fraction_per_n;
    SummaryStats slack;  // C ||F_n - F||_phi - |L(F_n) - L(F)|
    double min_slack = 0.0;
};

/// Fraction of (replication, n) pairs with |L(F_n) - L(F)| <= C ||F_n - F||_{phi_{gamma,F}},
/// C = holder_constant. cfg.functional must be an L-functional with Lipschitz
/// data; cfg.weight is ignored. Throws ConditionViolation if C does not exist.
[[nodiscard]] HolderReport holder_bound_experiment(const ExperimentConfig& cfg, double gamma);

/// Worker count: MZLAW_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
[[nodiscard]] unsigned resolve_thread_count();

}  // namespace mzlaw
