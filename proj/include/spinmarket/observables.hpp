#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spinmarket/lattice.hpp"

namespace spinmarket {

/// Number of sites whose spin differs between a and b. Throws SizeMismatch.
std::uint64_t hamming_distance(const SpinLattice& a, const SpinLattice& b);

/// Microscopic stability factor: (1/2P) sum |s_i(a) + s_i(b)| = 1 - d_H(a, b) / P.
double msf(const SpinLattice& a, const SpinLattice& b);

/**
 * Log return of the magnetization "price":
 * ln(max(|m_now|, floor)) - ln(max(|m_prev|, floor)).
 *
 * The absolute value and the floor keep the logarithm defined when M
 * crosses zero; runs use floor = 1/P (one spin's worth of magnetization).
 */
double log_return(double m_now, double m_prev, double floor);

/// Sample autocorrelation for lags 0..max_lag (rho(0) = 1). Two-pass.
/// Throws DegenerateSeries for zero variance, InvalidParams if too short.
std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag);

/// Fourth standardized moment minus 3 (population moments). Needs >= 4 points.
double excess_kurtosis(std::span<const double> series);

/// Autocorrelation of |R(t)|.
std::vector<double> volatility_clustering(std::span<const double> returns, std::size_t max_lag);

double mean(std::span<const double> series);
/// Population variance (divides by n).
double variance(std::span<const double> series);

/// One recorded frame of a run.
struct SeriesRecord {
    std::int64_t step = 0;
    double temperature = 0.0;
    double magnetization = 0.0;
    std::optional<double> log_return;  // absent only when no earlier frame exists
    std::optional<double> msf;
};

/// Time-indexed record of M, R, MSF and T for one replica.
struct RunSeries {
    std::vector<SeriesRecord> records;

    std::vector<double> returns() const;
    std::vector<double> msf_values() const;
    std::vector<double> temperatures() const;

    /// Records whose temperature lies in [t_lo, t_hi).
    RunSeries segment(double t_lo, double t_hi) const;

    /// Checks the documented invariants (|M| <= 1, MSF in [0,1], increasing steps).
    bool valid() const;
};

/// Trailing-window moving average; output[k] averages input[max(0,k-w+1)..k].
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

}  // namespace spinmarket
