#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "emgaction/errors.hpp"

namespace emgaction::fft {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

// Twiddle factors for a given size, cached per thread. Extraction runs frames
// on worker threads; a thread_local cache avoids locking.
inline const std::vector<cplx>& twiddles(std::size_t n) {
    thread_local std::size_t cached_n = 0;
    thread_local std::vector<cplx> table;
    if (cached_n != n) {
        table.resize(n / 2);
        const double step = -2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(n);
        for (std::size_t k = 0; k < n / 2; ++k)
            table[k] = std::polar(1.0, step * static_cast<double>(k));
        cached_n = n;
    }
    return table;
}

} // namespace detail

// In-place iterative radix-2 transform. Size must be a power of two.
// The inverse applies the 1/N scaling.
inline void transform_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw DimError("fft: size " + std::to_string(n) + " is not a power of two");
    if (n == 1) return;

    // Bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Complex products written out by hand: the checked std::complex multiply
    // dominates the per-frame cost otherwise.
    const std::vector<cplx>& w = detail::twiddles(n);
    const double conj_sign = inverse ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx& tw = w[k * stride];
                const double twr = tw.real();
                const double twi = conj_sign * tw.imag();
                const cplx& vv = a[i + k + len / 2];
                const double vr = vv.real() * twr - vv.imag() * twi;
                const double vi = vv.real() * twi + vv.imag() * twr;
                const cplx u = a[i + k];
                a[i + k] = cplx(u.real() + vr, u.imag() + vi);
                a[i + k + len / 2] = cplx(u.real() - vr, u.imag() - vi);
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (cplx& c : a) c *= inv_n;
    }
}

// Forward transform of a real signal zero-padded (or truncated) to size n.
inline std::vector<cplx> forward_real(const std::vector<double>& x, std::size_t n) {
    std::vector<cplx> a(n, cplx(0.0, 0.0));
    const std::size_t m = x.size() < n ? x.size() : n;
    for (std::size_t i = 0; i < m; ++i) a[i] = cplx(x[i], 0.0);
    transform_pow2(a, false);
    return a;
}

// One-sided magnitude spectrum of x over bins k = 1..N/2 where N is the next
// power of two above the signal length (DC excluded, Nyquist included).
inline std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
    if (x.size() < 2) throw TooShortError("magnitude_spectrum: need at least 2 samples");
    const std::size_t n = next_pow2(x.size());
    std::vector<cplx> a = forward_real(x, n);
    std::vector<double> mag(n / 2);
    for (std::size_t k = 1; k <= n / 2; ++k) mag[k - 1] = std::abs(a[k]);
    return mag;
}

} // namespace emgaction::fft
