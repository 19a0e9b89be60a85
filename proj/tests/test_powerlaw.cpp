#include "catch_amalgamated.hpp"

#include <cmath>

#include "spinmarket/error.hpp"
#include "spinmarket/powerlaw.hpp"
#include "support.hpp"

using namespace spinmarket;
using Catch::Approx;

TEST_CASE("Hurwitz zeta against direct summation", "[powerlaw][oracle]") {
    for (double s : {1.2, 1.5, 1.9, 2.0, 2.5, 3.7}) {
        for (double q : {1.0, 2.0, 5.0, 17.0}) {
            INFO("s=" << s << " q=" << q);
            CHECK(hurwitz_zeta(s, q) == Approx(oracle::zeta_sum(s, q)).epsilon(1e-10));
        }
    }
    CHECK(hurwitz_zeta(2.0, 1.0) == Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
}

TEST_CASE("MLE recovers the exponent of synthetic zeta samples", "[powerlaw][oracle]") {
    struct Case {
        double gamma;
        std::uint64_t seed;
    };
    for (const Case c : {Case{1.5, 11}, Case{2.0, 12}, Case{2.5, 13}}) {
        const auto hist = oracle::zeta_sample(c.gamma, 5, 100'000, c.seed);
        const PowerLawFit fit = fit_power_law(hist, 5);
        INFO("gamma=" << c.gamma << " fit=" << fit.exponent << " se=" << fit.std_error);
        CHECK(fit.n_tail == 100'000);
        CHECK(fit.xmin == 5);
        CHECK(fit.std_error > 0.0);
        CHECK(std::abs(fit.exponent - c.gamma) < 3.0 * fit.std_error);
        // asymptotic error of the discrete MLE is close to (gamma - 1) / sqrt(n)
        CHECK(fit.std_error == Approx((c.gamma - 1.0) / std::sqrt(1e5)).epsilon(0.35));
    }
}

TEST_CASE("MLE at exponent 1.9 is within 0.05", "[powerlaw][oracle]") {
    const auto hist = oracle::zeta_sample(1.9, 5, 100'000, 77);
    CHECK(fit_power_law(hist, 5).exponent == Approx(1.9).margin(0.05));
}

TEST_CASE("sizes below xmin are ignored", "[powerlaw]") {
    auto hist = oracle::zeta_sample(2.0, 5, 20'000, 5);
    const auto base = fit_power_law(hist, 5);
    hist[1] += 1'000'000;
    hist[4] += 12345;
    const auto noisy = fit_power_law(hist, 5);
    CHECK(noisy.exponent == base.exponent);
    CHECK(noisy.n_tail == base.n_tail);
}

TEST_CASE("tail errors", "[powerlaw]") {
    SECTION("all clusters the same size") {
        try {
            fit_power_law(SizeHistogram{{7, 500}}, 5);
            FAIL("expected DegenerateTail");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateTail);
        }
    }
    SECTION("fewer than ten tail samples") {
        try {
            fit_power_law(SizeHistogram{{1, 1000}, {5, 4}, {9, 5}}, 5);
            FAIL("expected InsufficientTail");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InsufficientTail);
        }
    }
}

TEST_CASE("sign selection pools histograms", "[powerlaw]") {
    ClusterStats stats;
    stats.plus = oracle::zeta_sample(1.8, 5, 5'000, 1);
    stats.minus = oracle::zeta_sample(1.8, 5, 5'000, 2);
    const auto both = fit_power_law(stats, SignSelect::Both, 5);
    CHECK(both.n_tail == 10'000);
    CHECK(fit_power_law(stats, SignSelect::Plus, 5).n_tail == 5'000);
    CHECK(both.exponent == Approx(1.8).margin(0.05));
}

TEST_CASE("log-binned regression is a rough cross-check", "[powerlaw]") {
    const auto hist = oracle::zeta_sample(2.0, 5, 200'000, 9);
    const auto fit = fit_power_law_logbinned(hist, 5);
    CHECK(fit.exponent == Approx(2.0).margin(0.2));
    CHECK_THROWS_AS(fit_power_law_logbinned(SizeHistogram{{6, 100}}, 5), Error);
}
