#include "catch_amalgamated.hpp"

#include <algorithm>
#include <set>

#include "spinmarket/clusters.hpp"
#include "spinmarket/experiments.hpp"
#include "spinmarket/glauber.hpp"
#include "support.hpp"

using namespace spinmarket;

namespace {

std::vector<std::set<int>> labeling_sets(const ClusterLabeling& lab) {
    std::vector<std::set<int>> out;
    for (const auto& c : lab.clusters()) {
        const auto m = lab.members(c.id);
        out.emplace_back(m.begin(), m.end());
    }
    return out;
}

SpinLattice from_rows(const std::vector<std::string>& rows) {
    std::vector<std::int8_t> s;
    for (const auto& r : rows)
        for (char ch : r) s.push_back(ch == '+' ? 1 : -1);
    return SpinLattice(static_cast<int>(rows.size()), std::move(s));
}

SpinLattice shifted(const SpinLattice& l, int dr, int dc) {
    const int n = l.side();
    std::vector<std::int8_t> s(l.sites());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s[static_cast<std::size_t>(((r + dr) % n) * n + (c + dc) % n)] = l.spin(r, c);
    return SpinLattice(n, std::move(s));
}

}  // namespace

TEST_CASE("uniform and checkerboard labelings", "[clusters]") {
    ModelParams p;
    p.side = 4;
    const auto up = label_clusters(new_lattice(p, InitState::AllUp));
    REQUIRE(up.clusters().size() == 1);
    CHECK(up.clusters()[0].sign == 1);
    CHECK(up.clusters()[0].size == 16);

    const auto cb = label_clusters(new_lattice(p, InitState::Checkerboard));
    CHECK(cb.clusters().size() == 16);
    for (const auto& c : cb.clusters()) CHECK(c.size == 1);

    const auto stats = size_distribution(cb);
    CHECK(stats.plus == SizeHistogram{{1, 8}});
    CHECK(stats.minus == SizeHistogram{{1, 8}});
    CHECK(size_distribution(up).plus == SizeHistogram{{16, 1}});
    CHECK(size_distribution(up).minus.empty());
}

TEST_CASE("columns merge across the periodic seam", "[clusters]") {
    const auto l = from_rows({"-++-", "-++-", "-++-", "-++-"});
    const auto lab = label_clusters(l);
    const auto stats = size_distribution(lab);
    CHECK(stats.minus == SizeHistogram{{8, 1}});
    CHECK(stats.plus == SizeHistogram{{8, 1}});
    CHECK(oracle::partition(labeling_sets(lab)) == oracle::partition(oracle::flood_fill(oracle::to_grid(l))));
}

TEST_CASE("labeling equals a flood-fill oracle on 1000 random lattices", "[clusters][oracle]") {
    Rng pick(2024);
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const int n = 2 + static_cast<int>(pick.below(15));
        const double p_up = 0.2 + 0.6 * pick.uniform();
        const auto l = oracle::random_lattice(n, seed, p_up);
        const auto lab = label_clusters(l);
        const auto sets = labeling_sets(lab);
        REQUIRE(oracle::partition(sets) == oracle::partition(oracle::flood_fill(oracle::to_grid(l))));

        std::uint64_t total = 0;
        for (const auto& c : lab.clusters()) {
            total += c.size;
            for (auto site : lab.members(c.id)) {
                REQUIRE(lab.label(site) == c.id);
                REQUIRE(l.spin(site) == c.sign);
            }
        }
        REQUIRE(total == l.sites());
        // maximality: equal-sign neighbours share a label
        for (std::size_t i = 0; i < l.sites(); ++i) {
            const int r = static_cast<int>(i) / n, c = static_cast<int>(i) % n;
            const std::size_t right = static_cast<std::size_t>(r * n + (c + 1) % n);
            const std::size_t down = static_cast<std::size_t>(((r + 1) % n) * n + c);
            if (l.spin(i) == l.spin(right)) REQUIRE(lab.label(i) == lab.label(right));
            if (l.spin(i) == l.spin(down)) REQUIRE(lab.label(i) == lab.label(down));
        }
        REQUIRE(size_distribution(lab).total_sites() == l.sites());
    }
}

TEST_CASE("cluster ids follow the lowest member site", "[clusters]") {
    const auto lab = label_clusters(oracle::random_lattice(10, 3));
    std::uint32_t prev_first = 0;
    for (const auto& c : lab.clusters()) {
        const auto m = lab.members(c.id);
        REQUIRE(std::is_sorted(m.begin(), m.end()));
        if (c.id > 0) CHECK(m.front() > prev_first);
        prev_first = m.front();
    }
}

TEST_CASE("sign flip swaps histograms; translation leaves them unchanged", "[clusters][property]") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto l = oracle::random_lattice(12, seed);
        const auto s = size_distribution(label_clusters(l));
        const auto neg = size_distribution(label_clusters(l.negated()));
        REQUIRE(neg.plus == s.minus);
        REQUIRE(neg.minus == s.plus);
        const auto sh = size_distribution(label_clusters(shifted(l, static_cast<int>(seed % 12), 5)));
        REQUIRE(sh.plus == s.plus);
        REQUIRE(sh.minus == s.minus);
    }
}

TEST_CASE("largest cluster per sign", "[clusters]") {
    ModelParams p;
    p.side = 4;
    const auto up = label_clusters(new_lattice(p, InitState::AllUp));
    REQUIRE(largest_cluster(up, 1));
    CHECK(largest_cluster(up, 1)->size == 16);
    CHECK_FALSE(largest_cluster(up, -1));

    const auto cb = label_clusters(new_lattice(p, InitState::Checkerboard));
    const auto big = largest_cluster(cb, 1);
    REQUIRE(big);
    std::uint32_t lowest = UINT32_MAX;
    for (const auto& c : cb.clusters())
        if (c.sign == 1) lowest = std::min(lowest, c.id);
    CHECK(big->id == lowest);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto l = oracle::random_lattice(16, seed);
        const auto lab = label_clusters(l);
        for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}}) {
            std::size_t best = 0;
            for (const auto& set : oracle::flood_fill(oracle::to_grid(l)))
                if (l.spin(static_cast<std::size_t>(*set.begin())) == sign) best = std::max(best, set.size());
            const auto got = largest_cluster(lab, sign);
            REQUIRE(got);
            REQUIRE(got->size == best);
            for (const auto& c : lab.clusters())
                if (c.sign == sign && c.size == best) {
                    REQUIRE(got->id <= c.id);
                }
        }
    }
}

TEST_CASE("parallel frame labeling equals serial", "[clusters][parallel]") {
    std::vector<SpinLattice> frames;
    for (std::uint64_t seed = 1; seed <= 24; ++seed) frames.push_back(oracle::random_lattice(20, seed));
    const auto a = label_frames(frames, Execution::Serial);
    const auto b = label_frames(frames, Execution::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(std::ranges::equal(a[i].labels(), b[i].labels()));
        REQUIRE(a[i].clusters().size() == b[i].clusters().size());
    }
}
