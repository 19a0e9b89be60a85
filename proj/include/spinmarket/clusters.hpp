#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

struct Cluster {
    std::uint32_t id;
    std::int8_t sign;
    std::uint32_t size;
};

/**
 * Partition of the torus into maximal 4-connected same-sign clusters.
 *
 * Ids are canonical: clusters are numbered 0, 1, ... in order of their
 * lowest (row-major) site, so two labelings of the same configuration
 * compare equal element-wise.
 */
class ClusterLabeling {
public:
    int side() const noexcept { return side_; }
    std::size_t sites() const noexcept { return label_.size(); }
    std::int64_t source_step() const noexcept { return source_step_; }

    std::span<const std::uint32_t> labels() const noexcept { return label_; }
    std::uint32_t label(std::size_t site) const noexcept { return label_[site]; }
    std::span<const Cluster> clusters() const noexcept { return clusters_; }
    const Cluster& cluster(std::uint32_t id) const noexcept { return clusters_[id]; }

    /// Sites of cluster `id`, ascending.
    std::span<const std::uint32_t> members(std::uint32_t id) const noexcept {
        return std::span<const std::uint32_t>(member_sites_)
            .subspan(member_offsets_[id], member_offsets_[id + 1] - member_offsets_[id]);
    }

private:
    friend ClusterLabeling label_clusters(const SpinLattice& lattice);

    int side_ = 0;
    std::int64_t source_step_ = 0;
    std::vector<std::uint32_t> label_;
    std::vector<Cluster> clusters_;
    std::vector<std::uint32_t> member_offsets_;
    std::vector<std::uint32_t> member_sites_;
};

/// Union-find labeling with periodic 4-neighbour, equal-sign connectivity.
ClusterLabeling label_clusters(const SpinLattice& lattice);

using SizeHistogram = std::map<std::uint32_t, std::uint64_t>;  // size -> count

enum class SignSelect { Plus, Minus, Both };

struct ClusterStats {
    SizeHistogram plus;
    SizeHistogram minus;
    std::uint32_t largest_plus = 0;
    std::uint32_t largest_minus = 0;
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;

    const SizeHistogram& histogram(std::int8_t sign) const noexcept {
        return sign > 0 ? plus : minus;
    }
    SizeHistogram select(SignSelect which) const;

    /// Pools another frame's counts into this one.
    void merge(const ClusterStats& other);

    /// Sum of size * count over both signs.
    std::uint64_t total_sites() const noexcept;
};

ClusterStats size_distribution(const ClusterLabeling& labeling);

/// Largest cluster of `sign`; ties go to the lowest id. Empty if none.
std::optional<Cluster> largest_cluster(const ClusterLabeling& labeling, std::int8_t sign);

}  // namespace spinmarket
