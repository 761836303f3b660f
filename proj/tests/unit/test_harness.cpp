#include "mzlaw/harness.hpp"
#include "mzlaw/edf.hpp"
#include "mzlaw/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

using namespace mzlaw;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.generator = GeneratorSpec::iid(DistributionModel::uniform01());
    cfg.n_grid = {64, 128, 256, 512};
    cfg.replications = 40;
    cfg.master_seed = 12345;
    return cfg;
}

class ThreadEnv {
public:
    explicit ThreadEnv(const char* value) { setenv("MZLAW_THREADS", value, 1); }
    ~ThreadEnv() { unsetenv("MZLAW_THREADS"); }
};

}  // namespace

TEST(EstimateRate, ExactPowerLaws) {
    const std::vector<double> n{10, 100, 1000, 10000};
    std::vector<double> a, b, c;
    for (double v : n) {
        a.push_back(1.0 / std::sqrt(v));
        b.push_back(7.0);
        c.push_back(3.0 / v);
    }
    EXPECT_NEAR(estimate_rate(n, a).slope, -0.5, 1e-14);
    EXPECT_NEAR(estimate_rate(n, b).slope, 0.0, 1e-14);
    const auto fit = estimate_rate(n, c);
    EXPECT_NEAR(fit.slope, -1.0, 1e-14);
    EXPECT_NEAR(fit.slope_stderr, 0.0, 1e-12);
    EXPECT_THROW((void)estimate_rate(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                 std::invalid_argument);
}

TEST(Summaries, Type7Quantiles) {
    const std::vector<double> v{4, 1, 3, 2, 5};
    const auto s = summarize(v);
    EXPECT_DOUBLE_EQ(s.median, 3.0);
    EXPECT_DOUBLE_EQ(s.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.q10, 1.4);
    EXPECT_DOUBLE_EQ(s.q90, 4.6);
}

TEST(Harness, Deterministic) {
    ExperimentConfig cfg = small_config();
    cfg.replications = 1;
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    ASSERT_EQ(a.per_n.size(), b.per_n.size());
    for (std::size_t g = 0; g < a.per_n.size(); ++g) {
        EXPECT_EQ(a.per_n[g].values, b.per_n[g].values);
    }
    EXPECT_EQ(a.fitted_slope, b.fitted_slope);
}

TEST(Harness, ParallelMatchesSerial) {
    const ExperimentConfig cfg = small_config();
    RateReport serial, parallel;
    {
        ThreadEnv env("1");
        serial = run_experiment(cfg);
    }
    {
        ThreadEnv env("3");
        parallel = run_experiment(cfg);
    }
    for (std::size_t g = 0; g < serial.per_n.size(); ++g) {
        EXPECT_EQ(serial.per_n[g].values, parallel.per_n[g].values);
        EXPECT_EQ(serial.per_n[g].raw.median, parallel.per_n[g].raw.median);
    }
}

TEST(Harness, PrefixConsistency) {
    const ExperimentConfig cfg = small_config();
    const auto report = run_experiment(cfg);
    const DistributionModel F = DistributionModel::uniform01();
    for (std::size_t k : {0UL, 17UL}) {
        for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
            const auto fresh = sample_iid(F, cfg.n_grid[g], derive_seed(cfg.master_seed, k));
            const double d = weighted_sup_norm(EmpiricalDistribution(fresh), F, WeightFunction::uniform());
            EXPECT_EQ(report.per_n[g].values[k], d);
        }
    }
}

TEST(Harness, PrefixConsistencyDependent) {
    LinearProcessSpec lp;
    lp.truncation = 50;
    for (const GeneratorSpec& gen : {GeneratorSpec::ar1(0.5), GeneratorSpec::linear_process(lp)}) {
        const auto full = gen.simulate(300, 42);
        const auto part = gen.simulate(100, 42);
        for (std::size_t i = 0; i < part.size(); ++i) {
            ASSERT_EQ(full[i], part[i]);
        }
    }
}

TEST(Harness, StandardizedLinearProcess) {
    LinearProcessSpec lp;
    lp.truncation = 100;
    const auto x = GeneratorSpec::linear_process(lp).simulate(50000, 1);
    double s = 0.0;
    for (double v : x) s += v * v;
    EXPECT_NEAR(s / 50000.0, 1.0, 0.05);
}

TEST(Harness, SupNormDecreasesForUniform) {
    ExperimentConfig cfg = small_config();
    cfg.n_grid = {256, 1024, 4096};
    cfg.replications = 100;
    const auto r = run_experiment(cfg);
    EXPECT_TRUE(r.all_pass());
    EXPECT_NEAR(r.fitted_slope, -0.5, 0.1);
}

TEST(Harness, MeanFunctionalRate) {
    ExperimentConfig cfg = small_config();
    cfg.generator = GeneratorSpec::iid(DistributionModel::std_normal());
    cfg.functional = FunctionalSpec{};
    cfg.n_grid = {256, 1024, 4096, 16384};
    cfg.replications = 200;
    const auto r = run_experiment(cfg);
    EXPECT_NEAR(r.fitted_slope, -0.5, 0.1);
}

TEST(Harness, IntegrabilityWarning) {
    ExperimentConfig cfg = small_config();
    cfg.generator = GeneratorSpec::iid(DistributionModel::pareto_two_sided(2.0, 1.0, 0.25, 0.25));
    cfg.weight = WeightFunction::poly(1.5);
    cfg.r_exponent = 0.4;
    cfg.replications = 5;
    const auto r = run_experiment(cfg);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("integrability"), std::string::npos);
}

TEST(Harness, ConfigValidation) {
    ExperimentConfig cfg = small_config();
    cfg.n_grid = {100, 50};
    EXPECT_THROW((void)run_experiment(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.replications = 0;
    EXPECT_THROW((void)run_experiment(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.r_exponent = 0.5;
    EXPECT_THROW((void)run_experiment(cfg), std::invalid_argument);
}

TEST(Holder, UniformAnalyticCase) {
    ExperimentConfig cfg = small_config();
    cfg.functional = FunctionalSpec{};
    cfg.replications = 50;
    const auto h = holder_bound_experiment(cfg, 1.0);
    EXPECT_NEAR(h.constant, 0.5, 1e-12);
    EXPECT_EQ(h.fraction, 1.0);
}

TEST(Holder, SingleObservation) {
    ExperimentConfig cfg = small_config();
    cfg.generator = GeneratorSpec::iid(DistributionModel::std_normal());
    cfg.functional = FunctionalSpec{};
    cfg.n_grid = {1};
    cfg.replications = 1;
    EXPECT_EQ(holder_bound_experiment(cfg, 1.0).fraction, 1.0);
}

TEST(Holder, ConditionFailureAborts) {
    ExperimentConfig cfg = small_config();
    cfg.generator = GeneratorSpec::iid(DistributionModel::pareto_two_sided(2.0, 1.0, 0.25, 0.25));
    FunctionalSpec f;
    f.l_kernel = LKernel::power(0.5);
    cfg.functional = f;
    EXPECT_THROW((void)holder_bound_experiment(cfg, 0.9), ConditionViolation);
}

TEST(ThreadCount, Environment) {
    {
        ThreadEnv env("3");
        EXPECT_EQ(resolve_thread_count(), 3U);
    }
    {
        ThreadEnv env("zero");
        EXPECT_GE(resolve_thread_count(), 1U);
    }
}
