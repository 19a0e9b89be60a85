#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spinmarket/clusters.hpp"
#include "spinmarket/lattice.hpp"

namespace spinmarket {

/// Best same-sign successor of one cluster of the earlier labeling.
struct ClusterMatch {
    std::uint32_t id_before;
    std::optional<std::uint32_t> id_after;
    std::int8_t sign;
    std::uint32_t size_before;  // N_i^t
    std::uint32_t size_after;   // size of the matched cluster, 0 if unmatched
    std::uint32_t n_max;        // overlap with the matched cluster

    double stp_direct() const noexcept {
        return static_cast<double>(n_max) / static_cast<double>(size_before);
    }
    double stp_inverse() const noexcept {
        return size_after == 0 ? 0.0 : static_cast<double>(n_max) / static_cast<double>(size_after);
    }
};

/**
 * For every cluster C of `before`, the cluster D of `after` with the same sign
 * maximising |C n D|. Ties go to the larger D, then the lower id.
 * Throws SizeMismatch when the labelings cover different lattices.
 */
std::vector<ClusterMatch> match_clusters(const ClusterLabeling& before, const ClusterLabeling& after);

/// Size-weighted (by N_i^t) averages over a set of matches.
struct StpValues {
    double stp_d = 0.0;
    double stp_i = 0.0;
    double combined = 0.0;
    std::uint64_t weight = 0;  // sum of N_i^t; zero means no clusters contributed
};

struct StpReport {
    std::vector<ClusterMatch> matches;
    std::optional<StpValues> plus;
    std::optional<StpValues> minus;
    StpValues both;
    std::int64_t delta_t = 1;
};

enum class StpMode { AllClusters, LargestOnlyPerSign };

std::string_view to_string(StpMode mode) noexcept;

/// STP over all clusters of `before`.
StpReport stp_pair(const ClusterLabeling& before, const ClusterLabeling& after, std::int64_t delta_t = 1);

/// STP restricted to the largest +1 and largest -1 cluster of `before`.
StpReport stp_largest(const ClusterLabeling& before, const ClusterLabeling& after, std::int64_t delta_t = 1);

StpReport stp_report(const ClusterLabeling& before, const ClusterLabeling& after, StpMode mode,
                     std::int64_t delta_t = 1);

struct StpPoint {
    std::int64_t step;
    std::int64_t delta_t;
    StpMode mode;
    std::optional<StpValues> plus;
    std::optional<StpValues> minus;
    StpValues both;
};

/**
 * Per-frame STP for every pair of frames (t, t + delta_t) present in `frames`
 * (matched by step_count). Throws MissingSnapshots if no such pair exists.
 */
std::vector<StpPoint> stp_series(std::span<const SpinLattice> frames, std::int64_t delta_t, StpMode mode);

/// Same, reusing precomputed labelings (labelings[k] belongs to frames[k]).
std::vector<StpPoint> stp_series(std::span<const ClusterLabeling> labelings, std::int64_t delta_t, StpMode mode);

}  // namespace spinmarket
