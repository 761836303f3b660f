#include "mzlaw/edf.hpp"
#include "mzlaw/functionals.hpp"
#include "mzlaw/mixing.hpp"
#include "mzlaw/weights.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mzlaw;

void BM_SampleIidPareto(benchmark::State& state) {
    const auto model = DistributionModel::pareto_two_sided(4.0, 1.0, 0.25, 0.25);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_iid(model, n, 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIidPareto)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_SimulateAr1(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ar1(0.5, n, 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateAr1)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_SimulateLinearProcess(benchmark::State& state) {
    const LinearProcessSpec spec;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_linear_process(spec, n, 42));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateLinearProcess)->RangeMultiplier(8)->Range(1 << 10, 1 << 13);

void BM_SupNormUniformWeight(benchmark::State& state) {
    const auto model = DistributionModel::std_normal();
    const auto edf = build_edf(sample_iid(model, static_cast<std::size_t>(state.range(0)), 7));
    const auto w = WeightFunction::uniform();
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_sup_norm(edf, model, w));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SupNormUniformWeight)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_SupNormAdaptiveWeight(benchmark::State& state) {
    const auto model = DistributionModel::pareto_two_sided(4.0, 1.0, 0.25, 0.25);
    const auto edf = build_edf(sample_iid(model, static_cast<std::size_t>(state.range(0)), 7));
    const auto w = make_adaptive_weight(model, 0.6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(weighted_sup_norm(edf, model, w));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SupNormAdaptiveWeight)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_VStatisticExact(benchmark::State& state) {
    const auto edf = build_edf(sample_iid(DistributionModel::std_normal(), static_cast<std::size_t>(state.range(0)), 3));
    const auto g = VKernel::half_squared_diff();
    for (auto _ : state) {
        benchmark::DoNotOptimize(v_statistic(edf, g));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VStatisticExact)->RangeMultiplier(4)->Range(1 << 8, 1 << 12)->Complexity();

void BM_VStatisticMoments(benchmark::State& state) {
    const auto sample = sample_iid(DistributionModel::std_normal(), static_cast<std::size_t>(state.range(0)), 3);
    const auto g = VKernel::half_squared_diff();
    for (auto _ : state) {
        benchmark::DoNotOptimize(v_statistic_moments(sample, g));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VStatisticMoments)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Complexity();

}  // namespace

BENCHMARK_MAIN();
