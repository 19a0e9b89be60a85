#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinmarket/clusters.hpp"
#include "spinmarket/lattice.hpp"
#include "spinmarket/observables.hpp"
#include "spinmarket/parallel.hpp"
#include "spinmarket/persistence.hpp"
#include "spinmarket/powerlaw.hpp"
#include "spinmarket/rng.hpp"

namespace spinmarket {

/// 2 / ln(1 + sqrt 2), the 2D Ising ordering temperature.
inline constexpr double kCriticalTemperature = 2.269185314213022;
/// Rounded value used to split anneal segments.
inline constexpr double kCriticalTemperatureRounded = 2.26;

enum class Ramp { LinearInT, LinearInBeta };

Ramp parse_ramp(std::string_view name);
std::string_view to_string(Ramp ramp) noexcept;

struct AnnealSchedule {
    double t_start = 10.0;
    double t_end = 0.1;
    std::int64_t total_sweeps = 2'000'000;
    std::int64_t therm_sweeps = 25'000;
    Ramp ramp = Ramp::LinearInT;
    int plateaus = 0;  // 0 = continuous ramp, n >= 2 = staircase of n levels

    std::int64_t production_sweeps() const noexcept { return total_sweeps - therm_sweeps; }

    /**
     * Temperature of production sweep k in [1, production_sweeps()]. The ramp
     * fraction is f = k / production_sweeps(), so the last sweep runs at t_end.
     * LinearInT interpolates T, LinearInBeta interpolates 1/T.
     */
    double temperature_at(std::int64_t k) const noexcept;

    void validate() const;
};

struct RegimePreset {
    std::string name;
    double temperature;
    double alpha;
    int side = 100;
    std::int64_t run_sweeps = 300'000;
    std::int64_t snapshot_every = 1000;
};

std::span<const RegimePreset> regime_presets();
/// Throws InvalidParams for unknown names.
const RegimePreset& find_preset(std::string_view name);

/// Complete description of one replica's run.
struct RunConfig {
    ModelParams params;  // params.temperature is the fixed temperature of a regime run
    InitState init = InitState::Random;
    std::int64_t therm_sweeps = 25'000;
    std::int64_t run_sweeps = 1000;  // production sweeps (derived from the schedule for anneals)
    std::optional<AnnealSchedule> schedule;
    std::int64_t record_every = 1;
    std::int64_t snapshot_every = 1000;    // 0 disables snapshots
    std::int64_t stp_delta = 0;            // 0 = snapshot_every
    std::int64_t checkpoint_every = 100'000;  // 0 disables checkpoints
    std::uint64_t replica = 0;

    std::int64_t effective_stp_delta() const noexcept {
        return stp_delta > 0 ? stp_delta : snapshot_every;
    }
    double therm_temperature() const noexcept;
    double temperature_at(std::int64_t k) const noexcept;
    bool is_snapshot_step(std::int64_t k) const noexcept;

    void validate() const;
};

RunConfig regime_config(const RegimePreset& preset, std::uint64_t seed);
RunConfig anneal_config(const ModelParams& params, const AnnealSchedule& schedule);

/// Resumable state, taken right after the frame at `step` was recorded.
struct Checkpoint {
    std::int64_t step = 0;
    SpinLattice lattice;
    Rng::State rng{};
};

/// Hooks for streaming a run to storage. All callbacks run on the run's thread.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    virtual void on_record(const SeriesRecord&) {}
    virtual void on_snapshot(const SpinLattice&, double /*temperature*/) {}
    virtual void on_checkpoint(const Checkpoint&) {}
    /// Polled after each checkpoint; returning true ends the run there.
    virtual bool stop_after_checkpoint(std::int64_t /*step*/) { return false; }
};

struct RunOutput {
    RunSeries series;
    std::vector<SpinLattice> snapshots;  // kept only if requested
    SpinLattice final_state;
    bool completed = true;
};

/**
 * Thermalizes, then runs the production sweeps, recording M, R and MSF every
 * record_every sweeps (R and MSF relative to the previous recorded frame,
 * the first one relative to the thermalized state at step 0). Steps count
 * production sweeps. With `resume`, thermalization is skipped and the run
 * continues after resume->step with the saved generator state.
 */
RunOutput execute_run(const RunConfig& config, RunObserver* observer = nullptr,
                      const Checkpoint* resume = nullptr, bool keep_snapshots = true);

/// Fixed-temperature run.
RunOutput run_regime(const RunConfig& config, RunObserver* observer = nullptr);

/// Cooling run: thermalize at t_start, then follow the schedule.
RunOutput run_anneal(const ModelParams& params, const AnnealSchedule& schedule, InitState init,
                     std::int64_t record_every = 1, RunObserver* observer = nullptr);

// ---------------------------------------------------------------------------
// Analysis of recorded frames
// ---------------------------------------------------------------------------

struct AnalysisConfig {
    std::int64_t snapshot_every = 1000;  // anchors: steps that are multiples of this
    std::int64_t stp_delta = 1000;
    std::uint32_t xmin = kDefaultXmin;
    std::size_t max_lag = 20;
    std::uint64_t replica = 0;
    Execution exec = Execution::Parallel;
};

AnalysisConfig analysis_config(const RunConfig& run);

struct FrameClusters {
    std::int64_t step;
    ClusterStats stats;
};

struct PowerLawRow {
    std::string sign;  // "+1", "-1" or "both"
    PowerLawFit fit;
};

struct StatRow {
    std::string segment;
    std::string quantity;
    std::size_t lag;
    double value;
};

struct AnalysisResult {
    std::vector<FrameClusters> frames;
    ClusterStats pooled;
    std::vector<PowerLawRow> fits;
    std::vector<StpPoint> stp;  // both modes, ordered by mode then step
    std::vector<StatRow> stats;
};

/// Cluster statistics, power-law fits and STP of the snapshots, plus series statistics.
AnalysisResult analyze_run(std::span<const SpinLattice> snapshots, const RunSeries& series,
                           const AnalysisConfig& config);

/// Labels every frame; the parallel path gives the same result as the serial one.
std::vector<ClusterLabeling> label_frames(std::span<const SpinLattice> frames, Execution exec);

/**
 * Per-segment summaries of a series: segment "all", and for varying
 * temperature also "hot" (T >= 4), "critical" (2.26 <= T < 4), "cold" (T < 2.26)
 * and "frozen" (T < 1). Scalars use lag 0; acf rows use lags 1..max_lag.
 * Quantities whose series is degenerate are omitted.
 */
std::vector<StatRow> series_statistics(const RunSeries& series, std::size_t max_lag);

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Replica r of `base`: same configuration, generator stream r.
RunConfig replica_config(const RunConfig& base, std::uint64_t replica);

struct ReplicaSummary {
    RunSeries series;
    AnalysisResult analysis;
};

struct MeanError {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n); 0 when n == 1
};

MeanError mean_error(std::span<const double> values);

struct EnsembleAggregate {
    struct SeriesRow {
        std::int64_t step;
        double temperature;
        MeanError abs_magnetization;
        MeanError msf;
    };
    struct StpRow {
        std::int64_t step;
        std::int64_t delta_t;
        StpMode mode;
        std::string sign;
        MeanError combined;
    };
    struct ClusterRow {
        std::string sign;
        std::uint32_t size;
        MeanError count;  // per-replica pooled count; missing sizes count as 0
    };
    std::vector<SeriesRow> series;
    std::vector<StpRow> stp;
    std::vector<ClusterRow> clusters;
};

/// Deterministic reduction in replica order.
EnsembleAggregate aggregate_replicas(std::span<const ReplicaSummary> replicas);

/// Runs n replicas in memory (parallel over replicas) and analyzes each.
std::vector<ReplicaSummary> ensemble_run(const RunConfig& base, std::size_t n_replicas, Execution exec);

}  // namespace spinmarket
