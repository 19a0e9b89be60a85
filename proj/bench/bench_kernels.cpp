// Serial vs parallel paths of the data-parallel kernels, plus the serial sweep.

#include <benchmark/benchmark.h>

#include "spinmarket/clusters.hpp"
#include "spinmarket/experiments.hpp"
#include "spinmarket/glauber.hpp"
#include "spinmarket/observables.hpp"

using namespace spinmarket;

namespace {

ModelParams params(int side) {
    ModelParams p;
    p.side = side;
    p.temperature = 2.2;
    p.minority_coupling = 4.0;
    return p;
}

std::vector<SpinLattice> frames(int side, std::size_t n) {
    const auto p = params(side);
    Rng rng(1);
    auto l = new_lattice(p, InitState::Random, rng);
    std::vector<SpinLattice> out;
    for (std::size_t i = 0; i < n; ++i) {
        thermalize(l, p, rng, 5);
        out.push_back(l);
    }
    return out;
}

void BM_Sweep(benchmark::State& state) {
    const auto p = params(static_cast<int>(state.range(0)));
    Rng rng(1);
    auto l = new_lattice(p, InitState::Random, rng);
    for (auto _ : state) sweep(l, p, rng);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.sites()));
}
BENCHMARK(BM_Sweep)->Arg(64)->Arg(100)->Arg(256);

void BM_LabelFrames(benchmark::State& state) {
    const auto f = frames(100, 64);
    const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(label_frames(f, exec));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_LabelFrames)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AnalyzeRun(benchmark::State& state) {
    auto f = frames(100, 65);
    for (std::size_t i = 0; i < f.size(); ++i) f[i].set_step_count(static_cast<std::int64_t>(i) * 10);
    AnalysisConfig ac;
    ac.snapshot_every = 10;
    ac.stp_delta = 10;
    ac.exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(analyze_run(f, RunSeries{}, ac));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_AnalyzeRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
    RunConfig c;
    c.params = params(32);
    c.therm_sweeps = 50;
    c.run_sweeps = 200;
    c.snapshot_every = 20;
    const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(ensemble_run(c, 8, exec));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Ensemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Msf(benchmark::State& state) {
    const auto f = frames(256, 2);
    for (auto _ : state) benchmark::DoNotOptimize(msf(f[0], f[1]));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f[0].sites()));
}
BENCHMARK(BM_Msf);

}  // namespace

BENCHMARK_MAIN();
