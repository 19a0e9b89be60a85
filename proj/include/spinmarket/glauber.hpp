#pragma once

#include <cstddef>
#include <cstdint>

#include "spinmarket/lattice.hpp"
#include "spinmarket/rng.hpp"

namespace spinmarket {

/// h_i = J * (neighbour sum) - alpha * s_i * |M|.
inline double local_field(const SpinLattice& lattice, std::size_t site, double current_m,
                          double coupling, double minority_coupling) noexcept {
    const double s = lattice.spin(site);
    const double abs_m = current_m < 0.0 ? -current_m : current_m;
    return coupling * lattice.neighbor_sum(site) - minority_coupling * s * abs_m;
}

inline double local_field(const SpinLattice& lattice, std::size_t site, double current_m,
                          const ModelParams& params) noexcept {
    return local_field(lattice, site, current_m, params.coupling, params.minority_coupling);
}

/**
 * Heat-bath probability that the updated spin is +1: 1 / (1 + exp(-2 beta h)).
 *
 * Evaluated as 1 - p(-h) for negative fields, so p(h) + p(-h) == 1 exactly,
 * and saturated to exactly 0 / 1 once the exponent leaves the double range.
 */
double flip_probability(double h, double beta) noexcept;

/// Glauber dynamics at fixed parameters. One sweep = P random-site attempts.
void sweep(SpinLattice& lattice, const ModelParams& params, Rng& rng);

/// Sweep kernel with explicit temperature; used by annealing schedules.
void sweep(SpinLattice& lattice, double coupling, double minority_coupling, double beta,
           MagnetizationRefresh refresh, Rng& rng);

void thermalize(SpinLattice& lattice, const ModelParams& params, Rng& rng, std::int64_t n_sweeps);

}  // namespace spinmarket
