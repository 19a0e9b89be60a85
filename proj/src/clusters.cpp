#include "spinmarket/clusters.hpp"

#include <numeric>

namespace spinmarket {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) noexcept {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Smaller root wins so roots stay at the lowest site of their set.
    void unite(std::uint32_t a, std::uint32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent_[b] = a;
        else parent_[a] = b;
    }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

ClusterLabeling label_clusters(const SpinLattice& lattice) {
    const auto n = static_cast<std::uint32_t>(lattice.side());
    const auto p = static_cast<std::uint32_t>(lattice.sites());
    const auto spins = lattice.spins();

    DisjointSets sets(p);
    for (std::uint32_t row = 0; row < n; ++row) {
        const std::uint32_t base = row * n;
        const std::uint32_t below = (row + 1 == n ? 0 : base + n);
        for (std::uint32_t col = 0; col < n; ++col) {
            const std::uint32_t site = base + col;
            const std::uint32_t right = base + (col + 1 == n ? 0 : col + 1);
            if (spins[site] == spins[right]) sets.unite(site, right);
            if (spins[site] == spins[below + col]) sets.unite(site, below + col);
        }
    }

    ClusterLabeling out;
    out.side_ = lattice.side();
    out.source_step_ = lattice.step_count();
    out.label_.assign(p, 0);

    constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
    std::vector<std::uint32_t> root_to_id(p, kUnset);
    for (std::uint32_t site = 0; site < p; ++site) {
        const std::uint32_t root = sets.find(site);
        std::uint32_t& id = root_to_id[root];
        if (id == kUnset) {
            id = static_cast<std::uint32_t>(out.clusters_.size());
            out.clusters_.push_back(Cluster{id, spins[site], 0});
        }
        out.label_[site] = id;
        ++out.clusters_[id].size;
    }

    // Counting sort of sites by label gives ascending member lists.
    const std::size_t k = out.clusters_.size();
    out.member_offsets_.assign(k + 1, 0);
    for (std::size_t id = 0; id < k; ++id)
        out.member_offsets_[id + 1] = out.member_offsets_[id] + out.clusters_[id].size;
    out.member_sites_.resize(p);
    std::vector<std::uint32_t> cursor(out.member_offsets_.begin(), out.member_offsets_.end() - 1);
    for (std::uint32_t site = 0; site < p; ++site) out.member_sites_[cursor[out.label_[site]]++] = site;
    return out;
}

SizeHistogram ClusterStats::select(SignSelect which) const {
    if (which == SignSelect::Plus) return plus;
    if (which == SignSelect::Minus) return minus;
    SizeHistogram both = plus;
    for (const auto& [size, count] : minus) both[size] += count;
    return both;
}

void ClusterStats::merge(const ClusterStats& other) {
    for (const auto& [size, count] : other.plus) plus[size] += count;
    for (const auto& [size, count] : other.minus) minus[size] += count;
    largest_plus = std::max(largest_plus, other.largest_plus);
    largest_minus = std::max(largest_minus, other.largest_minus);
    n_plus += other.n_plus;
    n_minus += other.n_minus;
}

std::uint64_t ClusterStats::total_sites() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [size, count] : plus) total += std::uint64_t{size} * count;
    for (const auto& [size, count] : minus) total += std::uint64_t{size} * count;
    return total;
}

ClusterStats size_distribution(const ClusterLabeling& labeling) {
    ClusterStats stats;
    for (const auto& c : labeling.clusters()) {
        if (c.sign > 0) {
            ++stats.plus[c.size];
            ++stats.n_plus;
            stats.largest_plus = std::max(stats.largest_plus, c.size);
        } else {
            ++stats.minus[c.size];
            ++stats.n_minus;
            stats.largest_minus = std::max(stats.largest_minus, c.size);
        }
    }
    return stats;
}

std::optional<Cluster> largest_cluster(const ClusterLabeling& labeling, std::int8_t sign) {
    std::optional<Cluster> best;
    for (const auto& c : labeling.clusters()) {
        if (c.sign != sign) continue;
        if (!best || c.size > best->size) best = c;
    }
    return best;
}

}  // namespace spinmarket
