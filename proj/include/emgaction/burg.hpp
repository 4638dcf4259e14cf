#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "emgaction/errors.hpp"

namespace emgaction {

struct BurgResult {
    // Prediction-error filter A(z) = 1 + a[0] z^-1 + ... + a[p-1] z^-p.
    // An AR(1) process x[n] = 0.9 x[n-1] + e[n] yields a[0] ~= -0.9.
    std::vector<double> coefficients;
    std::vector<double> reflection; // one per stage, each in [-1, 1]
    double sigma2 = 0.0;            // prediction error variance at final order
};

// Burg's recursion on the mean-removed signal, minimizing the summed forward
// and backward prediction error. order 0 returns the centered mean square.
inline BurgResult burg_ar(const std::vector<double>& x, int order) {
    const int n = static_cast<int>(x.size());
    if (order < 0) throw OrderError("burg_ar: negative order");
    if (n <= order) throw OrderError("burg_ar: order " + std::to_string(order) +
                                     " needs more than " + std::to_string(order) + " samples");
    for (double v : x)
        if (!std::isfinite(v)) throw NonFiniteError("burg_ar: non-finite input");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;

    std::vector<double> f(x.size()), b(x.size());
    double e0 = 0.0;
    for (int i = 0; i < n; ++i) {
        f[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - mean;
        e0 += f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    }
    if (e0 <= 0.0) throw ConstantSignalError("burg_ar: constant input");

    BurgResult res;
    res.sigma2 = e0 / n;

    std::vector<double> a; // grows one coefficient per stage
    for (int m = 1; m <= order; ++m) {
        double num = 0.0, den = 0.0;
        for (int i = m; i < n; ++i) {
            const double fi = f[static_cast<std::size_t>(i)];
            const double bi = b[static_cast<std::size_t>(i - 1)];
            num += fi * bi;
            den += fi * fi + bi * bi;
        }
        if (den <= 0.0) throw ConstantSignalError("burg_ar: zero prediction energy at stage " +
                                                  std::to_string(m));
        const double k = -2.0 * num / den; // |k| <= 1 by the AM-GM inequality
        res.reflection.push_back(k);

        std::vector<double> a_next(static_cast<std::size_t>(m));
        for (int i = 0; i < m - 1; ++i)
            a_next[static_cast<std::size_t>(i)] =
                a[static_cast<std::size_t>(i)] + k * a[static_cast<std::size_t>(m - 2 - i)];
        a_next[static_cast<std::size_t>(m - 1)] = k;
        a = std::move(a_next);

        for (int i = n - 1; i >= m; --i) {
            const double fi = f[static_cast<std::size_t>(i)];
            const double bi = b[static_cast<std::size_t>(i - 1)];
            f[static_cast<std::size_t>(i)] = fi + k * bi;
            b[static_cast<std::size_t>(i)] = bi + k * fi;
        }
        res.sigma2 *= (1.0 - k * k);
    }
    res.coefficients = std::move(a);
    return res;
}

// psi(w_k) = sigma2 / |1 + sum a_m e^{-i m w}|^2 on n_freq frequencies
// uniformly spaced over [0, pi], endpoints included.
inline std::vector<double> psd_from_ar(const BurgResult& model, int n_freq) {
    if (n_freq < 2) throw ConfigError("psd_from_ar: n_freq must be >= 2");
    std::vector<double> psd(static_cast<std::size_t>(n_freq));
    const double step = 3.141592653589793238462643383279502884 / (n_freq - 1);
    for (int k = 0; k < n_freq; ++k) {
        const double w = step * k;
        std::complex<double> denom(1.0, 0.0);
        for (std::size_t m = 0; m < model.coefficients.size(); ++m)
            denom += model.coefficients[m] *
                     std::polar(1.0, -w * static_cast<double>(m + 1));
        psd[static_cast<std::size_t>(k)] = model.sigma2 / std::norm(denom);
    }
    return psd;
}

inline std::vector<double> burg_psd(const std::vector<double>& x, int order, int n_freq) {
    return psd_from_ar(burg_ar(x, order), n_freq);
}

// Partitions the frequency grid into n_bands contiguous near-equal ranges
// (remainder spread over the leading bands) and sums psi over each.
inline std::vector<double> band_powers(const std::vector<double>& psd, int n_bands) {
    if (n_bands < 1) throw ConfigError("band_powers: n_bands must be >= 1");
    const int n = static_cast<int>(psd.size());
    if (n_bands > n)
        throw ConfigError("band_powers: n_bands " + std::to_string(n_bands) +
                          " exceeds grid size " + std::to_string(n));
    std::vector<double> bands(static_cast<std::size_t>(n_bands), 0.0);
    const int base = n / n_bands;
    const int rem = n % n_bands;
    int idx = 0;
    for (int b = 0; b < n_bands; ++b) {
        const int width = base + (b < rem ? 1 : 0);
        for (int i = 0; i < width; ++i)
            bands[static_cast<std::size_t>(b)] += psd[static_cast<std::size_t>(idx++)];
    }
    return bands;
}

} // namespace emgaction
