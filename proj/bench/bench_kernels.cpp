// OpenMP kernels against their serial references.
//   bench_kernels --benchmark_filter=Sweep
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "fibrenet/experiments.hpp"

namespace {

using namespace fibrenet;

TransferOptions sweep_options() {
    TransferOptions o;
    o.integrator = IntegratorConfig::for_duration(300.0);
    o.integrator.dt = 300.0 / 8192;
    o.convergence.refine_dt = false;
    return o;
}

const std::vector<double> lengths{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

void BM_SweepParallel(benchmark::State& state) {
    const ModelParams p = reference_params(1.0);
    const TransferOptions o = sweep_options();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_length(p, lengths, 300.0, PulseSchedule{}, o));
}

void BM_SweepSerial(benchmark::State& state) {
    const ModelParams p = reference_params(1.0);
    const TransferOptions o = sweep_options();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_length_serial(p, lengths, 300.0, PulseSchedule{}, o));
}

void BM_DarkCheckParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(max_darkness_residual(n, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DarkCheckSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(max_darkness_residual_serial(n, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DarkCheckParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DarkCheckSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
