// Serial reference vs OpenMP kernels. Run with --benchmark_counters_tabular=true.

#include <benchmark/benchmark.h>

#include <vector>

#include "abring/metrics.hpp"
#include "abring/ring.hpp"

using namespace abring;

namespace {

const CompiledNetlist& composed_ring() {
    static const CompiledNetlist ring = [] {
        RingParams p;
        p.gamma_upper = p.gamma_lower = 0.18;
        p.uniform_loss = true;
        return CompiledNetlist(build_ab_ring(p));
    }();
    return ring;
}

const FrequencyGrid kGrid(7e9, 12.4e9, 5401);

void BM_SweepSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(composed_ring(), kGrid));
    state.SetItemsProcessed(state.iterations() * kGrid.size());
}

void BM_SweepParallel(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_parallel(composed_ring(), kGrid, workers));
    state.SetItemsProcessed(state.iterations() * kGrid.size());
}

void BM_AttenuationSweep(benchmark::State& state) {
    std::vector<double> gammas;
    for (int i = 0; i <= 30; ++i) gammas.push_back(0.03 * i);
    AttenuationSweepOptions o;
    o.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(attenuation_sweep(RingParams{}, gammas, o));
}

void BM_StochasticNoise(benchmark::State& state) {
    const auto spectrum = sweep_serial(composed_ring(), FrequencyGrid(7e9, 12.4e9, 541));
    NoiseOptions o;
    o.stochastic = true;
    o.realizations = 2000;
    o.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(noise_transmission(spectrum, o));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AttenuationSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_StochasticNoise)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
