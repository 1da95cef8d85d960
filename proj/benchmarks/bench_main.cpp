#include <benchmark/benchmark.h>

#include "aoi/optim.hpp"
#include "aoi/sim.hpp"

namespace {

aoi::SystemParams grid_params() {
    return aoi::SystemParams(0.4, aoi::ServiceDistribution::gamma(2.0, 10.0),
                             1.0 / (15.0 * std::exp(-0.2)));
}

void BM_FullReport(benchmark::State& state) {
    const aoi::SystemParams p = grid_params();
    const auto scheme = static_cast<aoi::SchemeId>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aoi::full_report(scheme, p));
    }
}
BENCHMARK(BM_FullReport)->DenseRange(0, 3);

void BM_Simulate(benchmark::State& state) {
    aoi::SimConfig cfg(static_cast<aoi::SchemeId>(state.range(0)), grid_params());
    cfg.deliveries = 50'000;
    cfg.warmup_deliveries = 500;
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aoi::simulate(cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.deliveries));
}
BENCHMARK(BM_Simulate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Optimize(benchmark::State& state) {
    aoi::CompFamily fam;
    fam.shape_k = 10.0;
    const aoi::CouplingSpec spec(15.0, 0.1);
    const aoi::ObjectiveWeights w(1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            aoi::optimize_mean_comp(aoi::SchemeId::NP_Buffer, 0.4, fam, spec, w));
    }
}
BENCHMARK(BM_Optimize)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
