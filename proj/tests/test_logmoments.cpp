#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emgaction/features.hpp"
#include "emgaction/rng.hpp"

using emgaction::Rng;

TEST_CASE("log moments produce exactly 17 features") {
    Rng rng(1);
    std::vector<double> x(512);
    for (double& v : x) v = rng.gaussian();
    REQUIRE(emgaction::log_moment_features(x).size() == 17);
}

TEST_CASE("single-bin spectrum closed form") {
    // psi(k0) = p at k0 = 9, everything else zero: g(i) = sqrt(k0^i p).
    const double p = 2.5;
    const int k0 = 9;
    std::vector<double> psi(64, 0.0);
    psi[k0 - 1] = p;
    std::vector<double> f = emgaction::log_moments_from_spectrum(psi);

    auto g = [&](int i) { return std::sqrt(std::pow(static_cast<double>(k0), i) * p); };
    REQUIRE(f[0] == Catch::Approx(std::log(g(0))).margin(1e-12));
    REQUIRE(f[1] == Catch::Approx(std::log(g(2))).margin(1e-12));
    REQUIRE(f[2] == Catch::Approx(std::log(g(4))).margin(1e-12));
    // f(5) = ln g(2) - (ln g(0) + ln g(4))/2 collapses to zero for one bin
    REQUIRE(f[4] == Catch::Approx(0.0).margin(1e-12));
    // first pair feature: (i,j) = (1,2)
    REQUIRE(f[7] == Catch::Approx(0.5 * std::log(g(1) * g(2))).margin(1e-12));
    // last pair feature: (i,j) = (4,5)
    REQUIRE(f[16] == Catch::Approx(0.5 * std::log(g(4) * g(5))).margin(1e-12));
}

TEST_CASE("amplitude scaling shifts f(1..3) by ln(c)/2 and leaves f(4..7) fixed") {
    Rng rng(314);
    std::vector<double> x(1000);
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = rng.gaussian() + 0.3 * std::sin(0.1 * static_cast<double>(n));
    std::vector<double> base = emgaction::log_moment_features(x);

    for (double c : {0.5, 2.0, 10.0}) {
        std::vector<double> scaled_input = x;
        for (double& v : scaled_input) v *= c;
        std::vector<double> scaled = emgaction::log_moment_features(scaled_input);
        const double shift = 0.5 * std::log(c);
        for (int i = 0; i < 3; ++i)
            REQUIRE(scaled[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)] ==
                    Catch::Approx(shift).margin(1e-8));
        for (int i = 3; i < 7; ++i)
            REQUIRE(scaled[static_cast<std::size_t>(i)] ==
                    Catch::Approx(base[static_cast<std::size_t>(i)]).margin(1e-8));
        // the pair features carry the same uniform shift as f(1..3)
        for (int i = 7; i < 17; ++i)
            REQUIRE(scaled[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)] ==
                    Catch::Approx(shift).margin(1e-8));
    }
}

TEST_CASE("log moments reject zero input") {
    std::vector<double> zero(256, 0.0);
    REQUIRE_THROWS_AS(emgaction::log_moment_features(zero), emgaction::ZeroEnergyError);
    std::vector<double> empty_spectrum;
    REQUIRE_THROWS_AS(emgaction::log_moments_from_spectrum(empty_spectrum), emgaction::ZeroEnergyError);
}

TEST_CASE("log moments guard negative log arguments") {
    // A wideband segment makes g(0) < g(2), so f(4) hits the |...| guard and
    // must still come out finite.
    Rng rng(9);
    std::vector<double> x(256);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    for (double f : emgaction::log_moment_features(x)) REQUIRE(std::isfinite(f));
}
