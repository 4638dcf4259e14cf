#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emgaction/features.hpp"
#include "emgaction/rng.hpp"

using emgaction::Rng;
using emgaction::TdConfig;

// ---------------------------------------------------------------------------
// Independent per-definition oracle. Each feature is its own tiny function,
// written from the definition, sharing nothing with the implementation.
// ---------------------------------------------------------------------------
namespace oracle {

using V = std::vector<double>;

double amplitude(const V& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double rms(const V& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

double var(const V& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size() - 1);
}

double wl(const V& x) {
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n) s += std::abs(x[n + 1] - x[n]);
    return s;
}

double mav(const V& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s / static_cast<double>(x.size());
}

double ssi(const V& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double zc(const V& x, double eps) {
    int c = 0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n)
        if (x[n] * x[n + 1] < 0.0 && std::abs(x[n] - x[n + 1]) >= eps) ++c;
    return c;
}

double ssc(const V& x, double eps) {
    int c = 0;
    for (std::size_t n = 1; n + 1 < x.size(); ++n)
        if ((x[n] - x[n - 1]) * (x[n] - x[n + 1]) > eps) ++c;
    return c;
}

double wamp(const V& x, double eps) {
    int c = 0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n)
        if (std::abs(x[n] - x[n + 1]) > eps) ++c;
    return c;
}

double iemg(const V& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double log_detector(const V& x) {
    bool all_zero = true;
    for (double v : x)
        if (v != 0.0) all_zero = false;
    if (all_zero) return 0.0;
    double s = 0.0;
    for (double v : x) s += std::log(std::max(std::abs(v), 1e-12));
    return std::exp(s / static_cast<double>(x.size()));
}

double myop(const V& x, double eps) {
    int c = 0;
    for (double v : x)
        if (std::abs(v) > eps) ++c;
    return static_cast<double>(c) / static_cast<double>(x.size());
}

double dasdv(const V& x) {
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n) s += (x[n + 1] - x[n]) * (x[n + 1] - x[n]);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double emav(const V& x) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pos = static_cast<double>(i + 1);
        const double p = (pos >= 0.2 * n && pos <= 0.8 * n) ? 0.75 : 0.5;
        s += std::pow(std::abs(x[i]), p);
    }
    return s / n;
}

double ewl(const V& x) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double pos = static_cast<double>(i + 1);
        const double p = (pos >= 0.2 * n && pos <= 0.8 * n) ? 0.75 : 0.5;
        s += std::pow(std::abs(x[i] - x[i - 1]), p);
    }
    return s;
}

double mmav(const V& x) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pos = static_cast<double>(i + 1);
        const double w = (pos >= 0.25 * n && pos <= 0.75 * n) ? 1.0 : 0.5;
        s += w * std::abs(x[i]);
    }
    return s / n;
}

double mmav2(const V& x) {
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pos = static_cast<double>(i + 1);
        double w;
        if (pos < 0.25 * n)
            w = 4.0 * pos / n;
        else if (pos > 0.75 * n)
            w = 4.0 * (n - pos) / n;
        else
            w = 1.0;
        s += w * std::abs(x[i]);
    }
    return s / n;
}

double mfl(const V& x) {
    double s = 0.0;
    for (std::size_t n = 0; n + 1 < x.size(); ++n) s += (x[n + 1] - x[n]) * (x[n + 1] - x[n]);
    return s > 0.0 ? std::log10(std::sqrt(s)) : 0.0;
}

double aac(const V& x) { return wl(x) / static_cast<double>(x.size()); }

double kurtosis(const V& x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    return m2 > 1e-300 ? m4 / (m2 * m2) : 0.0;
}

double skewness(const V& x) {
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return m2 > 1e-300 ? m3 / std::pow(m2, 1.5) : 0.0;
}

V all21(const V& x, double eps) {
    return {amplitude(x), rms(x),  var(x),  wl(x),    mav(x),   ssi(x),   zc(x, eps),
            ssc(x, eps),  wamp(x, eps), iemg(x), log_detector(x), myop(x, eps), dasdv(x),
            emav(x),      ewl(x),  mmav(x), mmav2(x), mfl(x),   aac(x),   kurtosis(x),
            skewness(x)};
}

} // namespace oracle

namespace {

TdConfig zero_threshold() {
    TdConfig cfg;
    cfg.threshold_override = 0.0;
    return cfg;
}

} // namespace

TEST_CASE("all-zero segment scores zero on every time-domain feature") {
    std::vector<double> zero(1000, 0.0);
    std::vector<double> f = emgaction::time_domain_features(zero, zero_threshold());
    REQUIRE(f.size() == 21);
    for (double v : f) REQUIRE(v == 0.0);
}

TEST_CASE("alternating unit segment has the closed-form counts") {
    std::vector<double> x(1000);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = (n % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> f = emgaction::time_domain_features(x, zero_threshold());
    REQUIRE(f[6] == 999.0);  // ZC
    REQUIRE(f[3] == 1998.0); // WL
    REQUIRE(f[1] == Catch::Approx(1.0).margin(1e-12)); // RMS
    REQUIRE(f[4] == Catch::Approx(1.0).margin(1e-12)); // MAV
}

TEST_CASE("tiled ramp segment matches the oracle feature by feature") {
    std::vector<double> x;
    const double tile[8] = {0.0, 1.0, 2.0, 1.0, 0.0, -1.0, -2.0, -1.0};
    for (int n = 0; n < 512; ++n) x.push_back(tile[n % 8]);
    TdConfig cfg;
    cfg.threshold_override = 0.1;
    std::vector<double> got = emgaction::time_domain_features(x, cfg);
    std::vector<double> expected = oracle::all21(x, 0.1);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        REQUIRE(got[i] == Catch::Approx(expected[i]).epsilon(1e-9).margin(1e-12));
}

TEST_CASE("random segments match the oracle to relative 1e-9") {
    Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 16 + rng.below(500);
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform(-4.0, 4.0);
        TdConfig cfg;
        const double eps = rng.uniform(0.0, 0.5);
        cfg.threshold_override = eps;
        std::vector<double> got = emgaction::time_domain_features(x, cfg);
        std::vector<double> expected = oracle::all21(x, eps);
        for (std::size_t i = 0; i < 21; ++i)
            REQUIRE(got[i] == Catch::Approx(expected[i]).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("relative threshold uses the sample standard deviation") {
    Rng rng(55);
    std::vector<double> x(200);
    for (double& v : x) v = rng.gaussian();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));

    TdConfig rel;
    rel.threshold_scale = 0.05;
    TdConfig abs_cfg;
    abs_cfg.threshold_override = 0.05 * sd;
    REQUIRE(emgaction::time_domain_features(x, rel) == emgaction::time_domain_features(x, abs_cfg));
}

TEST_CASE("constant segment zeroes kurtosis and skewness") {
    std::vector<double> x(100, 2.5);
    std::vector<double> f = emgaction::time_domain_features(x, zero_threshold());
    REQUIRE(f[19] == 0.0);
    REQUIRE(f[20] == 0.0);
    REQUIRE(f[0] == 2.5);                                // amplitude survives
    REQUIRE_THROWS_AS(emgaction::time_domain_features({1.0, 2.0}, zero_threshold()),
                      emgaction::TooShortError);
}
