#pragma once

#include <cstdint>

#include "spinmarket/clusters.hpp"

namespace spinmarket {

struct PowerLawFit {
    double exponent = 0.0;
    std::uint32_t xmin = 1;
    std::uint64_t n_tail = 0;
    double std_error = 0.0;
};

inline constexpr std::uint32_t kDefaultXmin = 5;
inline constexpr std::uint64_t kMinTail = 10;

/// Hurwitz zeta sum_{k>=0} (k + q)^-s for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

/**
 * Discrete maximum-likelihood exponent for P(x) = x^-g / zeta(g, xmin), x >= xmin.
 *
 * The log-likelihood is maximised over g in (1, 10) with a Brent search to
 * 1e-6; std_error is 1/sqrt(n * I(g)) with I the per-sample Fisher information.
 * Throws InsufficientTail (n_tail < 10) or DegenerateTail (one distinct size).
 */
PowerLawFit fit_power_law(const SizeHistogram& histogram, std::uint32_t xmin = kDefaultXmin);

PowerLawFit fit_power_law(const ClusterStats& stats, SignSelect which,
                          std::uint32_t xmin = kDefaultXmin);

/// Least-squares slope of the log-binned density; kept for figure comparison only.
PowerLawFit fit_power_law_logbinned(const SizeHistogram& histogram, std::uint32_t xmin = kDefaultXmin,
                                    int bins_per_decade = 5);

}  // namespace spinmarket
