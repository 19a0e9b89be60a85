#include "spinmarket/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinmarket/error.hpp"

namespace spinmarket {

std::uint64_t hamming_distance(const SpinLattice& a, const SpinLattice& b) {
    if (a.side() != b.side()) throw Error(ErrorCode::SizeMismatch, "configurations differ in size");
    const std::int8_t* sa = a.spins().data();
    const std::int8_t* sb = b.spins().data();
    const std::size_t n = a.sites();
    std::uint64_t differ = 0;
#pragma omp simd reduction(+ : differ)
    for (std::size_t i = 0; i < n; ++i) differ += (sa[i] != sb[i]);
    return differ;
}

double msf(const SpinLattice& a, const SpinLattice& b) {
    const std::uint64_t differ = hamming_distance(a, b);
    const std::uint64_t p = a.sites();
    return static_cast<double>(p - differ) / static_cast<double>(p);
}

double log_return(double m_now, double m_prev, double floor) {
    if (!(floor > 0.0)) throw Error(ErrorCode::InvalidParams, "return floor must be > 0");
    return std::log(std::max(std::abs(m_now), floor)) - std::log(std::max(std::abs(m_prev), floor));
}

double mean(std::span<const double> series) {
    if (series.empty()) throw Error(ErrorCode::DegenerateSeries, "empty series");
    double sum = 0.0;
    for (double x : series) sum += x;
    return sum / static_cast<double>(series.size());
}

double variance(std::span<const double> series) {
    const double m = mean(series);
    double ss = 0.0;
    for (double x : series) ss += (x - m) * (x - m);
    return ss / static_cast<double>(series.size());
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
    if (series.size() < max_lag + 2)
        throw Error(ErrorCode::InvalidParams, "series of length " + std::to_string(series.size()) +
                                                  " too short for max_lag " + std::to_string(max_lag));
    const double m = mean(series);
    std::vector<double> centered(series.size());
    double denom = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        centered[t] = series[t] - m;
        denom += centered[t] * centered[t];
    }
    if (!(denom > 0.0)) throw Error(ErrorCode::DegenerateSeries, "series has zero variance");

    std::vector<double> rho(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double num = 0.0;
        for (std::size_t t = 0; t + lag < centered.size(); ++t) num += centered[t] * centered[t + lag];
        rho[lag] = num / denom;
    }
    rho[0] = 1.0;
    return rho;
}

double excess_kurtosis(std::span<const double> series) {
    if (series.size() < 4) throw Error(ErrorCode::DegenerateSeries, "kurtosis needs at least 4 points");
    const double m = mean(series);
    double m2 = 0.0, m4 = 0.0;
    for (double x : series) {
        const double d2 = (x - m) * (x - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(series.size());
    m2 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw Error(ErrorCode::DegenerateSeries, "series has zero variance");
    return m4 / (m2 * m2) - 3.0;
}

std::vector<double> volatility_clustering(std::span<const double> returns, std::size_t max_lag) {
    std::vector<double> magnitude(returns.size());
    std::transform(returns.begin(), returns.end(), magnitude.begin(), [](double r) { return std::abs(r); });
    return autocorrelation(magnitude, max_lag);
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) throw Error(ErrorCode::InvalidParams, "window must be >= 1");
    std::vector<double> out(series.size());
    long double running = 0.0L;
    for (std::size_t k = 0; k < series.size(); ++k) {
        running += series[k];
        if (k >= window) running -= series[k - window];
        out[k] = static_cast<double>(running / static_cast<long double>(std::min(k + 1, window)));
    }
    return out;
}

std::vector<double> RunSeries::returns() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (r.log_return) out.push_back(*r.log_return);
    return out;
}

std::vector<double> RunSeries::msf_values() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (r.msf) out.push_back(*r.msf);
    return out;
}

std::vector<double> RunSeries::temperatures() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.temperature);
    return out;
}

RunSeries RunSeries::segment(double t_lo, double t_hi) const {
    RunSeries out;
    for (const auto& r : records)
        if (r.temperature >= t_lo && r.temperature < t_hi) out.records.push_back(r);
    return out;
}

bool RunSeries::valid() const {
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (std::abs(r.magnetization) > 1.0) return false;
        if (r.msf && (*r.msf < 0.0 || *r.msf > 1.0)) return false;
        if (k > 0 && r.step <= records[k - 1].step) return false;
    }
    return true;
}

}  // namespace spinmarket
