#include "spinmarket/bench.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "spinmarket/clusters.hpp"
#include "spinmarket/experiments.hpp"
#include "spinmarket/glauber.hpp"

namespace spinmarket {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SweepRate measure_sweep_rate(const ModelParams& params, std::int64_t sweeps) {
    params.validate();
    Rng rng(params.seed);
    SpinLattice lattice = new_lattice(params, InitState::Random, rng);
    thermalize(lattice, params, rng, std::min<std::int64_t>(sweeps / 10 + 1, 200));

    const auto start = std::chrono::steady_clock::now();
    thermalize(lattice, params, rng, sweeps);
    SweepRate r;
    r.side = params.side;
    r.sweeps = sweeps;
    r.seconds = seconds_since(start);
    r.attempts_per_second = static_cast<double>(sweeps) * static_cast<double>(params.sites()) / r.seconds;
    return r;
}

LabelingTiming compare_labeling(const ModelParams& params, std::size_t frames, std::int64_t spacing) {
    params.validate();
    Rng rng(params.seed);
    SpinLattice lattice = new_lattice(params, InitState::Random, rng);
    std::vector<SpinLattice> snaps;
    for (std::size_t i = 0; i < frames; ++i) {
        thermalize(lattice, params, rng, spacing);
        snaps.push_back(lattice);
    }

    LabelingTiming t;
    t.frames = frames;
    t.threads = thread_cap();
    auto start = std::chrono::steady_clock::now();
    const auto serial = label_frames(snaps, Execution::Serial);
    t.serial_seconds = seconds_since(start);
    start = std::chrono::steady_clock::now();
    const auto parallel = label_frames(snaps, Execution::Parallel);
    t.parallel_seconds = seconds_since(start);

    t.identical = serial.size() == parallel.size();
    for (std::size_t i = 0; t.identical && i < serial.size(); ++i)
        t.identical = std::ranges::equal(serial[i].labels(), parallel[i].labels());
    return t;
}

}  // namespace spinmarket
