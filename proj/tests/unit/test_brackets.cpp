#include "mzlaw/brackets.hpp"
#include "mzlaw/functionals.hpp"
#include "mzlaw/rng.hpp"
#include "oracle_values.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mzlaw;

namespace {

// Two-sided law with F(0) = 1/2 and a linear bridge on [-1, 1].
DistributionModel half_at_zero() {
    return DistributionModel::pareto_two_sided(2.0, 1.0, 0.25, 0.25);
}

std::vector<double> grid(std::size_t n) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return s;
}

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
    UniformStream s(seed);
    std::vector<double> u(n);
    for (double& v : u) v = s.next();
    return u;
}

}  // namespace

TEST(BracketWeight, Examples) {
    const auto w = bracket_weight(half_at_zero(), WeightFunction::uniform());
    EXPECT_DOUBLE_EQ(w.cutoff(), 0.5);
    EXPECT_EQ(w(0.2), 1.0);
    EXPECT_EQ(w(0.5), 1.0);
    EXPECT_EQ(w(0.50001), 0.0);
    EXPECT_EQ(w.right_limit(0.5), 0.0);

    const auto z = bracket_weight(DistributionModel::uniform01(), WeightFunction::poly(1.0));
    for (double t : {0.0, 0.1, 0.5, 1.0}) EXPECT_EQ(z(t), 0.0);

    const auto n = bracket_weight(DistributionModel::std_normal(), WeightFunction::poly(1.0));
    EXPECT_NEAR(n(0.25), 1.0 - oracle::kNormalQuantile025, 1e-14);
    EXPECT_NEAR(n.integral(0.0, 1.0), oracle::kIntegralOnePlusAbsNormalQuantileHalf, 1e-10);
}

TEST(BracketWeight, RequiresIntegrability) {
    EXPECT_THROW((void)bracket_weight(half_at_zero(), WeightFunction::poly(2.5)), ConditionViolation);
}

TEST(BracketPartition, IndicatorWeight) {
    const auto w = bracket_weight(half_at_zero(), WeightFunction::uniform());
    const auto p = build_partition(w, 0.2);
    std::size_t before_half = 0;
    for (std::size_t i = 1; i < p.t_points.size(); ++i) {
        if (p.t_points[i] <= 0.5) {
            ++before_half;
            EXPECT_LT(p.t_points[i] - p.t_points[i - 1], 0.2);
        }
    }
    EXPECT_GE(before_half, 3U);
    EXPECT_EQ(p.t_points.back(), 1.0);
    EXPECT_TRUE(verify_brackets(p, w, grid(1000)).holds);
}

TEST(BracketPartition, ZeroWeight) {
    const auto w = bracket_weight(DistributionModel::uniform01(), WeightFunction::uniform());
    const auto p = build_partition(w, 0.3);
    EXPECT_EQ(p.m, 1U);
    EXPECT_EQ(p.bracket_integrals.front(), 0.0);
    EXPECT_TRUE(verify_brackets(p, w, grid(100)).holds);
}

TEST(BracketPartition, NormalPolyWeight) {
    const auto w = bracket_weight(DistributionModel::std_normal(), WeightFunction::poly(1.0));
    const auto p = build_partition(w, 0.05);
    for (double b : p.bracket_integrals) EXPECT_LT(b, 0.05);
    const auto v = verify_brackets(p, w, grid(2000), 500);
    EXPECT_TRUE(v.holds) << v.reason;
    EXPECT_LT(v.max_bracket_integral, 0.05);
}

TEST(BracketPartition, BoundaryMembership) {
    const auto w = bracket_weight(DistributionModel::std_normal(), WeightFunction::poly(1.0));
    const auto p = build_partition(w, 0.1);
    std::vector<double> s(p.t_points.begin() + 1, p.t_points.end());
    EXPECT_TRUE(verify_brackets(p, w, s).holds);
}

TEST(BracketPartition, CoarsenedPartitionIsCaught) {
    const auto w = bracket_weight(DistributionModel::std_normal(), WeightFunction::poly(1.0));
    auto p = build_partition(w, 0.05);
    ASSERT_GT(p.t_points.size(), 4U);
    // Drop t_2: bracket 2 now spans two original brackets.
    p.t_points.erase(p.t_points.begin() + 2);
    p.w_values.erase(p.w_values.begin() + 2);
    const auto v = verify_brackets(p, w, grid(100));
    EXPECT_FALSE(v.holds);
    ASSERT_TRUE(v.offending_index.has_value());
    EXPECT_EQ(*v.offending_index, 2U);
}

TEST(BracketInequality, OnePoint) {
    // Uniform law on (0,1) has F(0) = 0, so the negative side is trivial.
    const auto m = DistributionModel::uniform01();
    const auto w = bracket_weight(m, WeightFunction::uniform());
    const auto p = build_partition(w, 0.2);
    const std::vector<double> u{0.3};
    const auto r = bracket_inequality_check(u, m, WeightFunction::uniform(), p);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_LE(r.rhs, 0.2 + 1e-15);
}

TEST(BracketInequality, OnePointNontrivial) {
    const auto m = half_at_zero();
    const auto phi = WeightFunction::uniform();
    const auto p = build_partition(bracket_weight(m, phi), 0.2);
    const std::vector<double> u{0.3};
    const auto r = bracket_inequality_check(u, m, phi, p);
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.lhs, 0.7, 1e-12);  // F_n = 1 from x = F^<-(0.3) < 0 on, where F = 0.3
}

TEST(BracketInequality, NormalReplications) {
    const auto m = DistributionModel::std_normal();
    const auto phi = WeightFunction::poly(1.0);
    const auto p = build_partition(bracket_weight(m, phi), 0.05);
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto u = uniforms(1000, derive_seed(77, k));
        const auto r = bracket_inequality_check(u, m, phi, p);
        EXPECT_TRUE(r.holds) << k << ": " << r.lhs << " > " << r.rhs;
    }
}

TEST(BracketInequality, PositiveSideByReflection) {
    const auto m = DistributionModel::pareto_two_sided(3.0, 1.0, 0.2, 0.3);
    const auto phi = WeightFunction::poly(1.0);
    const auto rm = reflect_model(m);
    const auto rphi = reflect_weight(phi);
    EXPECT_NEAR(cdf_eval(rm, 2.5), survival_eval(m, -2.5), 1e-15);
    const auto p = build_partition(bracket_weight(rm, rphi), 0.05);
    for (std::uint64_t k = 0; k < 10; ++k) {
        const auto u = reflect_uniforms(uniforms(500, derive_seed(5, k)));
        EXPECT_TRUE(bracket_inequality_check(u, rm, rphi, p).holds) << k;
    }
    EXPECT_THROW((void)reflect_model(DistributionModel::uniform01()), std::invalid_argument);
}
