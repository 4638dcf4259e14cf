#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "emgaction/burg.hpp"
#include "emgaction/rng.hpp"

using emgaction::BurgResult;
using emgaction::Rng;

namespace {

std::vector<double> ar1_process(double phi, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        prev = phi * prev + rng.gaussian();
        x[static_cast<std::size_t>(i)] = prev;
    }
    return x;
}

std::vector<double> white_noise(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = rng.gaussian();
    return x;
}

double sample_variance_population(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(x.size());
}

} // namespace

TEST_CASE("burg recovers an AR(1) coefficient") {
    std::vector<double> x = ar1_process(0.9, 4096, 2024);
    BurgResult r = emgaction::burg_ar(x, 1);
    REQUIRE(r.coefficients.size() == 1);
    REQUIRE(r.coefficients[0] == Catch::Approx(-0.9).margin(0.03));
}

TEST_CASE("burg on white noise gives small coefficients and the sample variance") {
    std::vector<double> x = white_noise(4096, 555);
    BurgResult r = emgaction::burg_ar(x, 4);
    for (double a : r.coefficients) REQUIRE(std::abs(a) < 0.1);
    REQUIRE(r.sigma2 == Catch::Approx(sample_variance_population(x)).epsilon(0.05));
}

TEST_CASE("burg order zero returns the centered mean square") {
    std::vector<double> x = {1.0, 3.0, 5.0, 7.0};
    BurgResult r = emgaction::burg_ar(x, 0);
    REQUIRE(r.coefficients.empty());
    REQUIRE(r.sigma2 == Catch::Approx(5.0)); // values centered: -3,-1,1,3 -> mean square 5
}

TEST_CASE("burg reflection coefficients stay in [-1, 1] and sigma2 never grows") {
    Rng rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> x(256);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        double prev_sigma2 = 1e300;
        for (int order = 1; order <= 8; ++order) {
            BurgResult r = emgaction::burg_ar(x, order);
            for (double k : r.reflection) {
                REQUIRE(k >= -1.0);
                REQUIRE(k <= 1.0);
            }
            REQUIRE(r.sigma2 <= prev_sigma2 + 1e-12);
            prev_sigma2 = r.sigma2;
        }
    }
}

TEST_CASE("burg error conditions") {
    std::vector<double> constant(100, 3.0);
    REQUIRE_THROWS_AS(emgaction::burg_ar(constant, 2), emgaction::ConstantSignalError);
    std::vector<double> x = {1.0, 2.0, 3.0};
    REQUIRE_THROWS_AS(emgaction::burg_ar(x, 3), emgaction::OrderError);
    REQUIRE_THROWS_AS(emgaction::burg_ar(x, -1), emgaction::OrderError);
}

TEST_CASE("burg psd peaks at a planted sinusoid frequency") {
    const int n_freq = 256;
    Rng rng(808);
    std::vector<double> x(2048);
    const double w0 = 0.2 * 3.14159265358979323846;
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = std::sin(w0 * static_cast<double>(n)) + 0.1 * rng.gaussian();
    std::vector<double> psd = emgaction::burg_psd(x, 8, n_freq);
    const auto argmax = std::max_element(psd.begin(), psd.end()) - psd.begin();
    const double peak_w = static_cast<double>(argmax) * 3.14159265358979323846 / (n_freq - 1);
    const double bin = 3.14159265358979323846 / (n_freq - 1);
    REQUIRE(std::abs(peak_w - w0) <= bin + 1e-12);
}

TEST_CASE("burg psd of white noise is approximately flat") {
    std::vector<double> x = white_noise(4096, 91);
    std::vector<double> psd = emgaction::burg_psd(x, 4, 128);
    const double hi = *std::max_element(psd.begin(), psd.end());
    const double lo = *std::min_element(psd.begin(), psd.end());
    REQUIRE(hi / lo < 3.0);
}

TEST_CASE("burg psd scales quadratically with amplitude") {
    std::vector<double> x = ar1_process(0.5, 1024, 4);
    std::vector<double> x2 = x;
    for (double& v : x2) v *= 2.0;
    std::vector<double> p1 = emgaction::burg_psd(x, 4, 64);
    std::vector<double> p2 = emgaction::burg_psd(x2, 4, 64);
    for (std::size_t k = 0; k < p1.size(); ++k)
        REQUIRE(p2[k] == Catch::Approx(4.0 * p1[k]).epsilon(1e-9));
}

TEST_CASE("band powers partition and conserve the spectrum") {
    std::vector<double> flat(100, 1.0);
    std::vector<double> bands = emgaction::band_powers(flat, 10);
    REQUIRE(bands.size() == 10);
    for (double b : bands) REQUIRE(b == Catch::Approx(10.0));

    std::vector<double> single(64, 0.0);
    single[17] = 5.0;
    std::vector<double> sb = emgaction::band_powers(single, 8);
    int nonzero = 0;
    for (double b : sb)
        if (b != 0.0) ++nonzero;
    REQUIRE(nonzero == 1);

    Rng rng(6);
    std::vector<double> random(257);
    for (double& v : random) v = rng.uniform(0.0, 10.0);
    std::vector<double> rb = emgaction::band_powers(random, 10);
    double total_bands = 0.0, total_psd = 0.0;
    for (double b : rb) total_bands += b;
    for (double v : random) total_psd += v;
    REQUIRE(total_bands == Catch::Approx(total_psd).epsilon(1e-12));
}

TEST_CASE("band powers validate the band count") {
    std::vector<double> psd(5, 1.0);
    REQUIRE_THROWS_AS(emgaction::band_powers(psd, 6), emgaction::ConfigError);
    REQUIRE_THROWS_AS(emgaction::band_powers(psd, 0), emgaction::ConfigError);
}
