// Independent reference implementations used as test oracles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "spinmarket/lattice.hpp"
#include "spinmarket/rng.hpp"

namespace oracle {

using Grid = std::vector<std::vector<int>>;

inline spinmarket::SpinLattice random_lattice(int n, std::uint64_t seed, double p_up = 0.5) {
    spinmarket::Rng rng(seed);
    std::vector<std::int8_t> s(static_cast<std::size_t>(n) * n);
    for (auto& v : s) v = rng.uniform() < p_up ? 1 : -1;
    return spinmarket::SpinLattice(n, std::move(s));
}

inline Grid to_grid(const spinmarket::SpinLattice& l) {
    const int n = l.side();
    Grid g(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g[r][c] = l.spin(r, c);
    return g;
}

/// Breadth-first flood fill on the torus; returns one set of sites (r*n+c) per cluster.
inline std::vector<std::set<int>> flood_fill(const Grid& g) {
    const int n = static_cast<int>(g.size());
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    std::vector<std::set<int>> out;
    for (int r0 = 0; r0 < n; ++r0) {
        for (int c0 = 0; c0 < n; ++c0) {
            if (seen[r0][c0]) continue;
            std::set<int> cluster;
            std::vector<std::pair<int, int>> queue{{r0, c0}};
            seen[r0][c0] = true;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const auto [r, c] = queue[head];
                cluster.insert(r * n + c);
                const int nbr[4][2] = {{(r + 1) % n, c}, {(r + n - 1) % n, c}, {r, (c + 1) % n}, {r, (c + n - 1) % n}};
                for (const auto& q : nbr) {
                    if (!seen[q[0]][q[1]] && g[q[0]][q[1]] == g[r][c]) {
                        seen[q[0]][q[1]] = true;
                        queue.emplace_back(q[0], q[1]);
                    }
                }
            }
            out.push_back(std::move(cluster));
        }
    }
    return out;
}

/// Set of clusters as a canonical set-of-sets, for comparison up to relabeling.
inline std::set<std::set<int>> partition(const std::vector<std::set<int>>& clusters) {
    return {clusters.begin(), clusters.end()};
}

/**
 * Plain heat-bath Glauber on an explicit 2D grid. The minority term
 * recomputes M from scratch before every attempt. Draw order per attempt:
 * site index, then one uniform.
 */
class ReferenceGlauber {
public:
    ReferenceGlauber(Grid grid, double j, double alpha, double temperature, spinmarket::Rng rng)
        : g_(std::move(grid)), j_(j), alpha_(alpha), beta_(1.0 / temperature), rng_(rng) {}

    void sweep() {
        const int n = static_cast<int>(g_.size());
        const std::uint32_t p = static_cast<std::uint32_t>(n) * n;
        for (std::uint32_t a = 0; a < p; ++a) {
            const std::uint32_t site = rng_.below(p);
            const double u = rng_.uniform();
            const int r = static_cast<int>(site) / n, c = static_cast<int>(site) % n;
            const int nb = g_[(r + 1) % n][c] + g_[(r + n - 1) % n][c] + g_[r][(c + 1) % n] + g_[r][(c + n - 1) % n];
            double h = j_ * nb;
            if (alpha_ != 0.0) h -= alpha_ * g_[r][c] * std::abs(magnetization());
            const double p_up = 1.0 / (1.0 + std::exp(-2.0 * beta_ * h));
            g_[r][c] = u < p_up ? 1 : -1;
        }
    }

    double magnetization() const {
        long sum = 0;
        for (const auto& row : g_)
            for (int v : row) sum += v;
        return static_cast<double>(sum) * (1.0 / static_cast<double>(g_.size() * g_.size()));
    }

    const Grid& grid() const { return g_; }

private:
    Grid g_;
    double j_, alpha_, beta_;
    spinmarket::Rng rng_;
};

/// Hurwitz zeta by direct summation plus an integral tail; accurate to ~1e-12 for s >= 1.3.
inline double zeta_sum(double s, double q) {
    constexpr int kTerms = 200000;
    double sum = 0.0;
    for (int k = kTerms - 1; k >= 0; --k) sum += std::pow(q + k, -s);
    const double a = q + kTerms;
    // Euler-Maclaurin tail from a: integral + half term + first derivative correction
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) + s / 12.0 * std::pow(a, -s - 1.0);
    return sum;
}

/// Discrete power-law sample p(x) = x^-gamma / zeta(gamma, xmin) by inverse CDF.
inline std::map<std::uint32_t, std::uint64_t> zeta_sample(double gamma, std::uint32_t xmin, std::size_t n,
                                                          std::uint64_t seed) {
    const double z = zeta_sum(gamma, xmin);
    // Cumulative table up to a cutoff; beyond it the continuous approximation of the tail is used.
    constexpr std::uint32_t kTable = 1'000'000;
    std::vector<double> cdf;
    cdf.reserve(kTable);
    double acc = 0.0;
    for (std::uint32_t x = xmin; x < xmin + kTable; ++x) {
        acc += std::pow(static_cast<double>(x), -gamma) / z;
        cdf.push_back(acc);
    }
    spinmarket::Rng rng(seed);
    std::map<std::uint32_t, std::uint64_t> hist;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::uint32_t x;
        if (it != cdf.end()) {
            x = xmin + static_cast<std::uint32_t>(it - cdf.begin());
        } else {
            // survival beyond the table: S(x) ~ x^(1-gamma) / ((gamma-1) z)
            const double tail = 1.0 - u;
            const double xr = std::pow(tail * (gamma - 1.0) * z, 1.0 / (1.0 - gamma));
            x = static_cast<std::uint32_t>(std::min(xr, 4.0e9));
        }
        ++hist[x];
    }
    return hist;
}

}  // namespace oracle
