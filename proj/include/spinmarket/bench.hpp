#pragma once

#include <cstddef>
#include <cstdint>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

struct SweepRate {
    int side = 0;
    std::int64_t sweeps = 0;
    double seconds = 0.0;
    double attempts_per_second = 0.0;
};

/// Times `sweeps` sweeps after a short warm-up (excluded from the timing).
SweepRate measure_sweep_rate(const ModelParams& params, std::int64_t sweeps);

struct LabelingTiming {
    std::size_t frames = 0;
    int threads = 1;
    double serial_seconds = 0.0;
    double parallel_seconds = 0.0;
    bool identical = false;  // parallel labels equal the serial ones
};

/// Labels `frames` snapshots `spacing` sweeps apart, serially and in parallel.
LabelingTiming compare_labeling(const ModelParams& params, std::size_t frames, std::int64_t spacing);

}  // namespace spinmarket
