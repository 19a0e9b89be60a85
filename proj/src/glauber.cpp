#include "spinmarket/glauber.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

namespace spinmarket {

namespace {

// exp(-x) underflows to a denormal/zero beyond this; treat as saturated.
constexpr double kSaturation = 708.0;

inline double logistic_nonneg(double x) noexcept {
    if (x >= kSaturation) return 1.0;
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

double flip_probability(double h, double beta) noexcept {
    const double x = 2.0 * beta * h;
    if (x >= 0.0) return logistic_nonneg(x);
    return 1.0 - logistic_nonneg(-x);
}

void sweep(SpinLattice& lattice, double coupling, double minority_coupling, double beta,
           MagnetizationRefresh refresh, Rng& rng) {
    const auto n_sites = static_cast<std::uint32_t>(lattice.sites());
    const double inv_p = 1.0 / static_cast<double>(n_sites);
    const double frozen_abs_m = std::abs(lattice.magnetization());
    const bool per_attempt = refresh == MagnetizationRefresh::PerAttempt;

    for (std::uint32_t attempt = 0; attempt < n_sites; ++attempt) {
        const std::uint32_t site = rng.below(n_sites);
        const double u = rng.uniform();
        const int s = lattice.spin(site);
        const double abs_m = per_attempt
                                 ? static_cast<double>(std::llabs(lattice.magnetization_sum())) * inv_p
                                 : frozen_abs_m;
        const double h = coupling * lattice.neighbor_sum(site) - minority_coupling * s * abs_m;
        const std::int8_t next = u < flip_probability(h, beta) ? 1 : -1;
        if (next != s) lattice.set_spin(site, next);
    }
    lattice.advance_step();
    assert(lattice.consistent());
}

void sweep(SpinLattice& lattice, const ModelParams& params, Rng& rng) {
    sweep(lattice, params.coupling, params.minority_coupling, params.beta(), params.refresh, rng);
}

void thermalize(SpinLattice& lattice, const ModelParams& params, Rng& rng, std::int64_t n_sweeps) {
    for (std::int64_t i = 0; i < n_sweeps; ++i) sweep(lattice, params, rng);
}

}  // namespace spinmarket
