#include "spinmarket/powerlaw.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "spinmarket/error.hpp"

namespace spinmarket {

namespace {

constexpr double kMinExponent = 1.0 + 1e-6;
constexpr double kMaxExponent = 10.0;
constexpr int kBrentBits = 24;  // ~1.2e-7 relative on the abscissa

struct Tail {
    std::uint64_t n = 0;
    double sum_log = 0.0;
    std::size_t distinct = 0;
};

Tail summarize_tail(const SizeHistogram& histogram, std::uint32_t xmin) {
    Tail t;
    for (auto it = histogram.lower_bound(xmin); it != histogram.end(); ++it) {
        if (it->second == 0) continue;
        t.n += it->second;
        t.sum_log += static_cast<double>(it->second) * std::log(static_cast<double>(it->first));
        ++t.distinct;
    }
    return t;
}

void check_tail(const Tail& t, std::uint32_t xmin) {
    if (t.n < kMinTail)
        throw Error(ErrorCode::InsufficientTail, "power-law fit needs >= 10 samples at or above xmin=" +
                                                     std::to_string(xmin) + ", got " + std::to_string(t.n));
    if (t.distinct < 2)
        throw Error(ErrorCode::DegenerateTail, "all tail sizes are equal; exponent is undetermined");
}

}  // namespace

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw Error(ErrorCode::InvalidParams, "hurwitz_zeta needs s > 1, q > 0");
    constexpr int kDirect = 15;
    // B_2j / (2j)!
    constexpr std::array<double, 7> kCoeff = {
        1.0 / 12.0,           -1.0 / 720.0,           1.0 / 30240.0,          -1.0 / 1209600.0,
        1.0 / 47900160.0,     -691.0 / 1307674368000.0, 1.0 / 74724249600.0};

    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
    const double a = q + kDirect;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);

    // Rising factorial s (s+1) ... (s+2j-2) times a^{-s-2j+1}.
    double rising = s;
    double power = std::pow(a, -s - 1.0);
    const double inv_a2 = 1.0 / (a * a);
    for (std::size_t j = 0; j < kCoeff.size(); ++j) {
        sum += kCoeff[j] * rising * power;
        const double m = 2.0 * static_cast<double>(j) + 1.0;
        rising *= (s + m) * (s + m + 1.0);
        power *= inv_a2;
    }
    return sum;
}

PowerLawFit fit_power_law(const SizeHistogram& histogram, std::uint32_t xmin) {
    if (xmin < 1) throw Error(ErrorCode::InvalidParams, "xmin must be >= 1");
    const Tail tail = summarize_tail(histogram, xmin);
    check_tail(tail, xmin);

    const double n = static_cast<double>(tail.n);
    const double q = static_cast<double>(xmin);
    auto neg_log_likelihood = [&](double g) { return n * std::log(hurwitz_zeta(g, q)) + g * tail.sum_log; };

    const auto [g_hat, nll] =
        boost::math::tools::brent_find_minima(neg_log_likelihood, kMinExponent, kMaxExponent, kBrentBits);
    (void)nll;

    // Fisher information per sample = d^2/dg^2 log zeta(g, xmin).
    const double step = 1e-4;
    const double lo = std::max(g_hat - step, kMinExponent);
    const double hi = lo + 2.0 * step;
    const double mid = lo + step;
    const double info = (std::log(hurwitz_zeta(hi, q)) - 2.0 * std::log(hurwitz_zeta(mid, q)) +
                         std::log(hurwitz_zeta(lo, q))) /
                        (step * step);

    PowerLawFit fit;
    fit.exponent = g_hat;
    fit.xmin = xmin;
    fit.n_tail = tail.n;
    fit.std_error = info > 0.0 ? 1.0 / std::sqrt(n * info) : std::numeric_limits<double>::infinity();
    return fit;
}

PowerLawFit fit_power_law(const ClusterStats& stats, SignSelect which, std::uint32_t xmin) {
    return fit_power_law(stats.select(which), xmin);
}

PowerLawFit fit_power_law_logbinned(const SizeHistogram& histogram, std::uint32_t xmin, int bins_per_decade) {
    if (xmin < 1 || bins_per_decade < 1) throw Error(ErrorCode::InvalidParams, "bad log-binning parameters");
    const Tail tail = summarize_tail(histogram, xmin);
    check_tail(tail, xmin);

    // Bin b covers integer sizes in [xmin * r^b, xmin * r^(b+1)).
    const double ratio = std::pow(10.0, 1.0 / bins_per_decade);
    std::vector<double> counts;
    for (auto it = histogram.lower_bound(xmin); it != histogram.end(); ++it) {
        const auto b = static_cast<std::size_t>(
            std::floor(std::log(static_cast<double>(it->first) / xmin) / std::log(ratio) + 1e-12));
        if (counts.size() <= b) counts.resize(b + 1, 0.0);
        counts[b] += static_cast<double>(it->second);
    }

    std::vector<double> xs, ys;
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b] <= 0.0) continue;
        const double lo = std::ceil(xmin * std::pow(ratio, static_cast<double>(b)) - 1e-9);
        const double hi = std::ceil(xmin * std::pow(ratio, static_cast<double>(b + 1)) - 1e-9);
        const double width = std::max(1.0, hi - lo);
        xs.push_back(0.5 * (std::log(lo) + std::log(std::max(lo, hi - 1.0))));
        ys.push_back(std::log(counts[b] / (width * static_cast<double>(tail.n))));
    }
    if (xs.size() < 3) throw Error(ErrorCode::DegenerateTail, "log-binned fit needs at least 3 occupied bins");

    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        rss += r * r;
    }

    PowerLawFit fit;
    fit.exponent = -slope;
    fit.xmin = xmin;
    fit.n_tail = tail.n;
    fit.std_error = std::sqrt(rss / std::max(1.0, k - 2.0) / sxx);
    return fit;
}

}  // namespace spinmarket
