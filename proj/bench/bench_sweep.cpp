#include <benchmark/benchmark.h>

#include "rigsim/thresholds.hpp"

using namespace rigsim;

namespace {

SweepSpec bench_spec() {
    SweepSpec spec;
    spec.model = Model::rig;
    spec.n = 400;
    spec.alpha = 2.0;
    spec.properties = {PropertyKind::connectivity, PropertyKind::perfect_matching};
    spec.grid = {-2, 0, 2};
    spec.samples = 20;
    spec.seed = 7;
    return spec;
}

void BM_SweepSerial(benchmark::State& state) {
    const SweepSpec spec = bench_spec();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(spec));
}

void BM_SweepParallel(benchmark::State& state) {
    const SweepSpec spec = bench_spec();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep(spec, threads));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
