#include "spinmarket/persistence.hpp"

#include <algorithm>
#include <map>

#include "spinmarket/error.hpp"

namespace spinmarket {

std::string_view to_string(StpMode mode) noexcept {
    return mode == StpMode::AllClusters ? "all" : "largest";
}

namespace {

ClusterMatch best_match(const ClusterLabeling& before, const ClusterLabeling& after, const Cluster& c,
                        std::vector<std::uint32_t>& overlap, std::vector<std::uint32_t>& touched) {
    // Same sign at a site <=> the spin did not change, so only those sites count.
    touched.clear();
    for (std::uint32_t site : before.members(c.id)) {
        const std::uint32_t d = after.label(site);
        if (after.cluster(d).sign != c.sign) continue;
        if (overlap[d]++ == 0) touched.push_back(d);
    }

    ClusterMatch m{c.id, std::nullopt, c.sign, c.size, 0, 0};
    for (std::uint32_t d : touched) {
        const std::uint32_t n = overlap[d];
        const std::uint32_t size = after.cluster(d).size;
        const bool better = n > m.n_max || (n == m.n_max && (size > m.size_after ||
                                                              (size == m.size_after && d < *m.id_after)));
        if (!m.id_after || better) {
            m.id_after = d;
            m.n_max = n;
            m.size_after = size;
        }
        overlap[d] = 0;
    }
    return m;
}

void check_compatible(const ClusterLabeling& before, const ClusterLabeling& after) {
    if (before.side() != after.side() || before.sites() != after.sites())
        throw Error(ErrorCode::SizeMismatch, "labelings cover lattices of different size");
}

StpReport summarize(std::vector<ClusterMatch> matches, std::int64_t delta_t) {
    struct Acc {
        std::uint64_t weight = 0;
        double d = 0.0;
        double i = 0.0;
        StpValues values() const {
            StpValues v;
            v.weight = weight;
            if (weight == 0) return v;
            v.stp_d = d / static_cast<double>(weight);
            v.stp_i = i / static_cast<double>(weight);
            v.combined = 0.5 * (v.stp_d + v.stp_i);
            return v;
        }
    } plus, minus, both;

    for (const auto& m : matches) {
        for (Acc* acc : {m.sign > 0 ? &plus : &minus, &both}) {
            acc->weight += m.size_before;
            acc->d += static_cast<double>(m.size_before) * m.stp_direct();
            acc->i += static_cast<double>(m.size_before) * m.stp_inverse();
        }
    }

    StpReport report;
    report.matches = std::move(matches);
    report.delta_t = delta_t;
    if (plus.weight > 0) report.plus = plus.values();
    if (minus.weight > 0) report.minus = minus.values();
    report.both = both.values();
    return report;
}

}  // namespace

std::vector<ClusterMatch> match_clusters(const ClusterLabeling& before, const ClusterLabeling& after) {
    check_compatible(before, after);
    std::vector<std::uint32_t> overlap(after.clusters().size(), 0);
    std::vector<std::uint32_t> touched;
    std::vector<ClusterMatch> out;
    out.reserve(before.clusters().size());
    for (const auto& c : before.clusters()) out.push_back(best_match(before, after, c, overlap, touched));
    return out;
}

StpReport stp_pair(const ClusterLabeling& before, const ClusterLabeling& after, std::int64_t delta_t) {
    return summarize(match_clusters(before, after), delta_t);
}

StpReport stp_largest(const ClusterLabeling& before, const ClusterLabeling& after, std::int64_t delta_t) {
    check_compatible(before, after);
    std::vector<std::uint32_t> overlap(after.clusters().size(), 0);
    std::vector<std::uint32_t> touched;
    std::vector<ClusterMatch> matches;
    for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}}) {
        if (auto c = largest_cluster(before, sign)) matches.push_back(best_match(before, after, *c, overlap, touched));
    }
    return summarize(std::move(matches), delta_t);
}

StpReport stp_report(const ClusterLabeling& before, const ClusterLabeling& after, StpMode mode,
                     std::int64_t delta_t) {
    return mode == StpMode::AllClusters ? stp_pair(before, after, delta_t) : stp_largest(before, after, delta_t);
}

std::vector<StpPoint> stp_series(std::span<const ClusterLabeling> labelings, std::int64_t delta_t, StpMode mode) {
    if (delta_t < 1) throw Error(ErrorCode::InvalidParams, "delta_t must be >= 1");
    std::map<std::int64_t, std::size_t> by_step;
    for (std::size_t k = 0; k < labelings.size(); ++k) by_step.emplace(labelings[k].source_step(), k);

    std::vector<StpPoint> out;
    for (const auto& [step, k] : by_step) {
        const auto partner = by_step.find(step + delta_t);
        if (partner == by_step.end()) continue;
        const StpReport r = stp_report(labelings[k], labelings[partner->second], mode, delta_t);
        out.push_back(StpPoint{step, delta_t, mode, r.plus, r.minus, r.both});
    }
    if (out.empty())
        throw Error(ErrorCode::MissingSnapshots,
                    "no pair of frames separated by delta_t=" + std::to_string(delta_t) + " sweeps");
    return out;
}

std::vector<StpPoint> stp_series(std::span<const SpinLattice> frames, std::int64_t delta_t, StpMode mode) {
    std::vector<ClusterLabeling> labelings;
    labelings.reserve(frames.size());
    for (const auto& f : frames) labelings.push_back(label_clusters(f));
    return stp_series(std::span<const ClusterLabeling>(labelings), delta_t, mode);
}

}  // namespace spinmarket
