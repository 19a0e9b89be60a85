#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "spinmarket/csv.hpp"
#include "spinmarket/experiments.hpp"

namespace spinmarket {

/**
 * On-disk run directory:
 *
 *     run.meta              key=value parameters, seeds and completion flag
 *     series.csv            replica,step,temperature,M,R,msf
 *     snapshots/step_<k>.txt
 *     checkpoint/           lattice.txt + state.meta (step, generator words)
 *     clusters.csv powerlaw.csv stp.csv stats.csv   (analysis)
 *     clusters.svg stp.svg msf.svg returns.svg      (unless plots are off)
 */
namespace run_files {
inline constexpr const char* kMeta = "run.meta";
inline constexpr const char* kSeries = "series.csv";
inline constexpr const char* kClusters = "clusters.csv";
inline constexpr const char* kPowerLaw = "powerlaw.csv";
inline constexpr const char* kStp = "stp.csv";
inline constexpr const char* kStats = "stats.csv";
inline constexpr const char* kSnapshots = "snapshots";
inline constexpr const char* kCheckpoint = "checkpoint";
inline constexpr const char* kLock = ".lock";
}  // namespace run_files

csv::KeyValues run_meta(const RunConfig& config, bool completed);
/// Inverse of run_meta. Throws Format on missing or malformed keys.
RunConfig parse_run_meta(const std::map<std::string, std::string>& kv);

/// Exclusive writer lock on a directory (`.lock`, created atomically).
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

struct DirectoryOptions {
    bool plots = true;
    /// Stop at the first checkpoint whose step is >= this value (simulated interruption).
    std::optional<std::int64_t> stop_after;
    Execution exec = Execution::Parallel;
};

/// Series, snapshots and analysis of one run directory, as read back from disk.
struct LoadedRun {
    RunConfig config;
    RunSeries series;
    std::vector<SpinLattice> snapshots;
};

LoadedRun load_run(const std::filesystem::path& dir);
RunSeries read_series(const std::filesystem::path& path);

/// Runs `config` into `dir` and analyzes it. Returns false if stopped early.
bool run_to_directory(const RunConfig& config, const std::filesystem::path& dir, const DirectoryOptions& options);

/// Continues an interrupted run from its checkpoint. Returns false if stopped early again.
bool resume_directory(const std::filesystem::path& dir, const DirectoryOptions& options);

/// (Re)writes clusters.csv, powerlaw.csv, stp.csv, stats.csv and the plots.
AnalysisResult analyze_directory(const std::filesystem::path& dir, const DirectoryOptions& options);

/**
 * Replica r goes to dir/replica_<r>/ (a full run directory). The top level
 * gets ensemble.meta, stp.csv (all replicas) and mean/stderr aggregates in
 * ensemble_series.csv, ensemble_stp.csv and ensemble_clusters.csv.
 */
EnsembleAggregate ensemble_to_directory(const RunConfig& base, std::size_t n_replicas,
                                        const std::filesystem::path& dir, const DirectoryOptions& options);

}  // namespace spinmarket
