#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emgaction/burg.hpp"
#include "emgaction/errors.hpp"
#include "emgaction/fft.hpp"
#include "emgaction/preprocess.hpp"

namespace emgaction {

// ---------------------------------------------------------------------------
// Inter-channel statistics
// ---------------------------------------------------------------------------

struct ChannelPair {
    int i = 0; // 0-based channel indices, i < j
    int j = 0;
};

// All unordered pairs in row-major order: (1,2)..(1,C), (2,3)..(2,C), ...
// For 8 channels this reproduces the 28-pair table with pair k feeding both
// the max-correlation block (slot k) and the covariance block (slot k + 28).
inline std::vector<ChannelPair> channel_pair_table(int channels) {
    std::vector<ChannelPair> pairs;
    for (int i = 0; i < channels; ++i)
        for (int j = i + 1; j < channels; ++j) pairs.push_back({i, j});
    return pairs;
}

namespace detail {

inline double signal_energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

// Max of the normalized linear cross-correlation given precomputed padded
// spectra. Lags outside (-W, W) carry no overlap and are skipped.
inline double max_similarity_from_spectra(const std::vector<fft::cplx>& sa,
                                          const std::vector<fft::cplx>& sb,
                                          double energy_a, double energy_b, int w) {
    const std::size_t m = sa.size();
    std::vector<fft::cplx> prod(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double ar = sa[k].real(), ai = sa[k].imag();
        const double br = sb[k].real(), bi = sb[k].imag();
        prod[k] = fft::cplx(ar * br + ai * bi, ai * br - ar * bi); // sa * conj(sb)
    }
    fft::transform_pow2(prod, true);

    double best = -std::numeric_limits<double>::infinity();
    for (int lag = 0; lag < w; ++lag) best = std::max(best, prod[static_cast<std::size_t>(lag)].real());
    for (int lag = 1; lag < w; ++lag)
        best = std::max(best, prod[m - static_cast<std::size_t>(lag)].real());
    return best / std::sqrt(energy_a * energy_b);
}

} // namespace detail

// Maximum over all lags in (-W, W) of the cross-correlation normalized by the
// geometric mean of the two signal energies; result lies in [-1, 1].
inline double max_similarity_index(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimError("max_similarity_index: unequal lengths");
    const int w = static_cast<int>(a.size());
    if (w < 2) throw TooShortError("max_similarity_index: need at least 2 samples");
    const double ea = detail::signal_energy(a);
    const double eb = detail::signal_energy(b);
    if (ea <= 0.0 || eb <= 0.0) throw ZeroEnergyError("max_similarity_index: all-zero input");

    const std::size_t m = fft::next_pow2(2 * static_cast<std::size_t>(w) - 1);
    return detail::max_similarity_from_spectra(fft::forward_real(a, m), fft::forward_real(b, m),
                                               ea, eb, w);
}

// Sample covariance at lag 0, (1/(W-1)) sum (a - mean_a)(b - mean_b).
inline double covariance_index(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimError("covariance_index: unequal lengths");
    const int w = static_cast<int>(a.size());
    if (w < 2) throw TooShortError("covariance_index: need at least 2 samples");
    double ma = 0.0, mb = 0.0;
    for (int n = 0; n < w; ++n) {
        ma += a[static_cast<std::size_t>(n)];
        mb += b[static_cast<std::size_t>(n)];
    }
    ma /= w;
    mb /= w;
    double acc = 0.0;
    for (int n = 0; n < w; ++n)
        acc += (a[static_cast<std::size_t>(n)] - ma) * (b[static_cast<std::size_t>(n)] - mb);
    return acc / (w - 1);
}

// ---------------------------------------------------------------------------
// Log moments of the Fourier spectrum
// ---------------------------------------------------------------------------

namespace detail {

// Logs are floored at |arg| = 1e-12: g(0) - g(2) is negative whenever k >= 1
// weights dominate, so the literal formula would take logs of negatives.
inline double guarded_log(double v) { return std::log(std::max(std::abs(v), 1e-12)); }

} // namespace detail

// The 17 log-moment features from a one-sided magnitude spectrum psi, where
// psi[t] is the magnitude at frequency index k = t + 1 (DC excluded).
inline std::vector<double> log_moments_from_spectrum(const std::vector<double>& psi) {
    if (psi.empty()) throw ZeroEnergyError("log_moments_from_spectrum: empty spectrum");
    double total = 0.0;
    for (double v : psi) total += std::abs(v);
    if (total <= 0.0) throw ZeroEnergyError("log_moments_from_spectrum: all-zero spectrum");

    std::array<double, 7> g{};
    {
        std::array<double, 7> acc{};
        for (std::size_t t = 0; t < psi.size(); ++t) {
            const double k = static_cast<double>(t + 1);
            double kp = 1.0;
            for (int i = 0; i <= 6; ++i) {
                acc[static_cast<std::size_t>(i)] += kp * psi[t];
                kp *= k;
            }
        }
        for (int i = 0; i <= 6; ++i) g[static_cast<std::size_t>(i)] = std::sqrt(acc[static_cast<std::size_t>(i)]);
    }

    const auto lg = detail::guarded_log;
    std::vector<double> f(17);
    f[0] = lg(g[0]);
    f[1] = lg(g[2]);
    f[2] = lg(g[4]);
    f[3] = lg(g[0]) - 0.5 * lg(g[0] - g[2]) - 0.5 * lg(g[0] - g[4]);
    f[4] = lg(g[2]) - 0.5 * lg(g[0] * g[4]);
    f[5] = lg(g[0]) - 0.5 * lg(g[1] * g[3]);
    f[6] = lg(g[0]) - 0.5 * lg(g[2] * g[6]);
    int slot = 7;
    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j)
            f[static_cast<std::size_t>(slot++)] =
                0.5 * lg(g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)]);
    return f;
}

inline std::vector<double> log_moment_features(const std::vector<double>& x) {
    return log_moments_from_spectrum(fft::magnitude_spectrum(x));
}

// ---------------------------------------------------------------------------
// Time-domain features
// ---------------------------------------------------------------------------

struct TdConfig {
    // Threshold for ZC/SSC/WAMP/MYOP: override wins, otherwise
    // threshold_scale times the sample standard deviation of the segment.
    double threshold_scale = 0.05;
    std::optional<double> threshold_override;

    double threshold_for(double sample_sd) const {
        return threshold_override ? *threshold_override : threshold_scale * sample_sd;
    }
};

// The 21 features in fixed order: Amplitude, RMS, VAR, WL, MAV, SSI, ZC, SSC,
// WAMP, IEMG, LOG, MYOP, DASDV, EMAV, EWL, MMAV, MMAV2, MFL, AAC, Kurtosis,
// Skewness. Counters use strict comparisons so an all-zero segment scores
// zero everywhere even with a zero threshold.
inline std::vector<double> time_domain_features(const std::vector<double>& x, const TdConfig& cfg) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw TooShortError("time_domain_features: need at least 4 samples");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, ss_centered = 0.0;
    for (double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        ss_centered += d2;
    }
    const double sample_sd = std::sqrt(ss_centered / (n - 1));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double eps = cfg.threshold_for(sample_sd);

    double amplitude = 0.0, ss = 0.0, abs_sum = 0.0, wl = 0.0, diff_sq = 0.0;
    double log_sum = 0.0, emav = 0.0, ewl = 0.0, mmav = 0.0, mmav2 = 0.0;
    int zc = 0, ssc = 0, wamp = 0, myop = 0;
    bool all_zero = true;

    for (int i = 0; i < n; ++i) {
        const double v = x[static_cast<std::size_t>(i)];
        const double av = std::abs(v);
        if (av > 0.0) all_zero = false;
        amplitude = std::max(amplitude, av);
        ss += v * v;
        abs_sum += av;
        log_sum += std::log(std::max(av, 1e-12));
        if (av > eps) ++myop;

        const int pos = i + 1; // 1-based sample index for the weight windows
        const double p = (pos >= 0.2 * n && pos <= 0.8 * n) ? 0.75 : 0.5;
        emav += std::pow(av, p);
        double w_mmav, w_mmav2;
        if (pos < 0.25 * n) {
            w_mmav = 0.5;
            w_mmav2 = 4.0 * pos / n;
        } else if (pos > 0.75 * n) {
            w_mmav = 0.5;
            w_mmav2 = 4.0 * (n - pos) / n;
        } else {
            w_mmav = 1.0;
            w_mmav2 = 1.0;
        }
        mmav += w_mmav * av;
        mmav2 += w_mmav2 * av;

        if (i + 1 < n) {
            const double nx = x[static_cast<std::size_t>(i + 1)];
            const double d = nx - v;
            wl += std::abs(d);
            diff_sq += d * d;
            if (v * nx < 0.0 && std::abs(d) >= eps) ++zc;
            if (std::abs(d) > eps) ++wamp;
            // EWL weights each difference by the position of its second sample
            const double pd = (pos + 1 >= 0.2 * n && pos + 1 <= 0.8 * n) ? 0.75 : 0.5;
            ewl += std::pow(std::abs(d), pd);
        }
        if (i >= 1 && i + 1 < n) {
            const double prev = x[static_cast<std::size_t>(i - 1)];
            const double nx = x[static_cast<std::size_t>(i + 1)];
            if ((v - prev) * (v - nx) > eps) ++ssc;
        }
    }

    std::vector<double> f(21);
    f[0] = amplitude;
    f[1] = std::sqrt(ss / n);
    f[2] = ss / (n - 1);
    f[3] = wl;
    f[4] = abs_sum / n;
    f[5] = ss;
    f[6] = zc;
    f[7] = ssc;
    f[8] = wamp;
    f[9] = abs_sum;
    f[10] = all_zero ? 0.0 : std::exp(log_sum / n);
    f[11] = static_cast<double>(myop) / n;
    f[12] = std::sqrt(diff_sq / (n - 1));
    f[13] = emav / n;
    f[14] = ewl;
    f[15] = mmav / n;
    f[16] = mmav2 / n;
    f[17] = diff_sq > 0.0 ? std::log10(std::sqrt(diff_sq)) : 0.0;
    f[18] = wl / n;
    f[19] = m2 > 1e-300 ? m4 / (m2 * m2) : 0.0;
    f[20] = m2 > 1e-300 ? m3 / std::pow(m2, 1.5) : 0.0;
    return f;
}

// ---------------------------------------------------------------------------
// Higher-order statistics
// ---------------------------------------------------------------------------

// C2 = E[x^2] - (E[x])^2, the population variance.
inline double second_order_cumulant(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw TooShortError("second_order_cumulant: need at least 2 samples");
    double mean = 0.0, sq = 0.0;
    for (double v : x) {
        mean += v;
        sq += v * v;
    }
    mean /= n;
    return sq / n - mean * mean;
}

// cum4(w,x,y,z) = E[wxyz] - E[wx]E[yz] - E[wy]E[xz] - E[wz]E[xy] on the
// mean-removed signals.
inline double fourth_order_cross_cumulant(const std::vector<double>& w, const std::vector<double>& x,
                                          const std::vector<double>& y, const std::vector<double>& z) {
    const std::size_t n = w.size();
    if (x.size() != n || y.size() != n || z.size() != n)
        throw DimError("fourth_order_cross_cumulant: unequal lengths");
    if (n < 2) throw TooShortError("fourth_order_cross_cumulant: need at least 2 samples");

    auto mean_of = [n](const std::vector<double>& v) {
        double m = 0.0;
        for (double u : v) m += u;
        return m / static_cast<double>(n);
    };
    const double mw = mean_of(w), mx = mean_of(x), my = mean_of(y), mz = mean_of(z);

    double wxyz = 0.0, wx = 0.0, yz = 0.0, wy = 0.0, xz = 0.0, wz = 0.0, xy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = w[i] - mw, b = x[i] - mx, c = y[i] - my, d = z[i] - mz;
        wxyz += a * b * c * d;
        wx += a * b;
        yz += c * d;
        wy += a * c;
        xz += b * d;
        wz += a * d;
        xy += b * c;
    }
    const double inv = 1.0 / static_cast<double>(n);
    return wxyz * inv - (wx * inv) * (yz * inv) - (wy * inv) * (xz * inv) - (wz * inv) * (xy * inv);
}

// ---------------------------------------------------------------------------
// Layout and full extraction
// ---------------------------------------------------------------------------

enum class Family { ICS, PSD, LMFS, TDS, HOSA };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::ICS: return "ICS";
        case Family::PSD: return "PSD";
        case Family::LMFS: return "LMFS";
        case Family::TDS: return "TDS";
        case Family::HOSA: return "HOSA";
    }
    return "?";
}

struct FeatureConfig {
    int burg_order = 4;
    int n_bands = 10;
    int n_freq = 256;
    TdConfig td;
    std::array<int, 4> hosa_group_a{0, 1, 2, 3}; // 0-based channel indices
    std::array<int, 4> hosa_group_b{4, 5, 6, 7};
    bool tds_per_channel = false; // the Tab-2 count of 21 implies the aggregated form

    void validate(int channels) const {
        if (burg_order < 1) throw ConfigError("burg_order must be >= 1");
        if (n_bands < 1) throw ConfigError("n_bands must be >= 1");
        if (n_freq < n_bands) throw ConfigError("n_freq must be >= n_bands");
        for (int c : hosa_group_a)
            if (c < 0 || c >= channels) throw ConfigError("hosa_group_a channel out of range");
        for (int c : hosa_group_b)
            if (c < 0 || c >= channels) throw ConfigError("hosa_group_b channel out of range");
    }
};

struct FeatureLayout {
    struct Slice {
        Family family;
        int offset = 0;
        int count = 0;
    };
    std::vector<Slice> slices;

    int total() const {
        int t = 0;
        for (const auto& s : slices) t += s.count;
        return t;
    }

    const Slice& slice(Family f) const {
        for (const auto& s : slices)
            if (s.family == f) return s;
        throw ConfigError("layout: unknown family");
    }

    static FeatureLayout for_config(int channels, const FeatureConfig& cfg) {
        cfg.validate(channels);
        const int pairs = channels * (channels - 1) / 2;
        FeatureLayout l;
        int off = 0;
        auto add = [&](Family f, int count) {
            l.slices.push_back({f, off, count});
            off += count;
        };
        add(Family::ICS, 2 * pairs);
        add(Family::PSD, channels * cfg.n_bands);
        add(Family::LMFS, 17 * channels);
        add(Family::TDS, cfg.tds_per_channel ? 21 * channels : 21);
        add(Family::HOSA, channels + 2);
        return l;
    }
};

struct FeatureVector {
    std::vector<double> values;
    ActionLabel label;
    std::string recording_id;
    int window_index = 0;
};

struct ExtractWarning {
    std::string recording_id;
    int window_index = 0;
    std::string where;
    std::string message;
};

// The 8-channel-per-frame PSD block: n_bands Burg band powers per channel,
// channel-major. Channels that defeat the estimator zero-fill their block.
inline std::vector<double> psd_features(const SegmentFrame& frame, const FeatureConfig& cfg,
                                        std::vector<ExtractWarning>* warnings = nullptr) {
    const int channels = frame.channel_count();
    std::vector<double> out(static_cast<std::size_t>(channels * cfg.n_bands), 0.0);
    std::vector<double> row(static_cast<std::size_t>(frame.window_length()));
    for (int c = 0; c < channels; ++c) {
        for (int n = 0; n < frame.window_length(); ++n)
            row[static_cast<std::size_t>(n)] = frame.data(c, n);
        try {
            std::vector<double> bands = band_powers(burg_psd(row, cfg.burg_order, cfg.n_freq), cfg.n_bands);
            std::copy(bands.begin(), bands.end(), out.begin() + static_cast<std::ptrdiff_t>(c) * cfg.n_bands);
        } catch (const Error& e) {
            if (warnings)
                warnings->push_back({frame.recording_id, frame.window_index,
                                     "PSD channel " + std::to_string(c + 1), e.what()});
        }
    }
    return out;
}

// Full per-frame extraction. Channel spectra for the cross-correlation block
// are computed once and shared across the 28 pairs.
inline FeatureVector extract_features(const SegmentFrame& frame, const FeatureConfig& cfg,
                                      std::vector<ExtractWarning>* warnings = nullptr) {
    const int channels = frame.channel_count();
    const int w = frame.window_length();
    cfg.validate(channels);
    if (channels < 2) throw FormatError("extract_features: need at least 2 channels");
    if (w < 4) throw TooShortError("extract_features: window too short");

    auto warn = [&](const std::string& where, const std::string& msg) {
        if (warnings) warnings->push_back({frame.recording_id, frame.window_index, where, msg});
    };

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(channels),
                                          std::vector<double>(static_cast<std::size_t>(w)));
    for (int c = 0; c < channels; ++c)
        for (int n = 0; n < w; ++n) rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)] = frame.data(c, n);

    const FeatureLayout layout = FeatureLayout::for_config(channels, cfg);
    std::vector<double> values(static_cast<std::size_t>(layout.total()), 0.0);
    int pos = 0;

    // ICS: 28 max-similarity values then 28 covariances, in pair-table order.
    const std::vector<ChannelPair> pairs = channel_pair_table(channels);
    {
        const std::size_t m = fft::next_pow2(2 * static_cast<std::size_t>(w) - 1);
        std::vector<std::vector<fft::cplx>> spectra(static_cast<std::size_t>(channels));
        std::vector<double> energy(static_cast<std::size_t>(channels));
        for (int c = 0; c < channels; ++c) {
            energy[static_cast<std::size_t>(c)] = detail::signal_energy(rows[static_cast<std::size_t>(c)]);
            if (energy[static_cast<std::size_t>(c)] > 0.0)
                spectra[static_cast<std::size_t>(c)] = fft::forward_real(rows[static_cast<std::size_t>(c)], m);
        }
        for (const ChannelPair& p : pairs) {
            const double ea = energy[static_cast<std::size_t>(p.i)];
            const double eb = energy[static_cast<std::size_t>(p.j)];
            if (ea <= 0.0 || eb <= 0.0) {
                warn("ICS pair (" + std::to_string(p.i + 1) + "," + std::to_string(p.j + 1) + ")",
                     "zero-energy channel; feature set to 0");
                values[static_cast<std::size_t>(pos++)] = 0.0;
            } else {
                values[static_cast<std::size_t>(pos++)] = detail::max_similarity_from_spectra(
                    spectra[static_cast<std::size_t>(p.i)], spectra[static_cast<std::size_t>(p.j)], ea, eb, w);
            }
        }
        for (const ChannelPair& p : pairs)
            values[static_cast<std::size_t>(pos++)] =
                covariance_index(rows[static_cast<std::size_t>(p.i)], rows[static_cast<std::size_t>(p.j)]);
    }

    // PSD band powers, channel-major.
    {
        std::vector<double> block = psd_features(frame, cfg, warnings);
        std::copy(block.begin(), block.end(), values.begin() + pos);
        pos += static_cast<int>(block.size());
    }

    // Log moments of the Fourier spectrum, 17 per channel.
    for (int c = 0; c < channels; ++c) {
        try {
            std::vector<double> lm = log_moment_features(rows[static_cast<std::size_t>(c)]);
            std::copy(lm.begin(), lm.end(), values.begin() + pos);
        } catch (const Error& e) {
            warn("LMFS channel " + std::to_string(c + 1), e.what());
        }
        pos += 17;
    }

    // Time-domain set on the across-channel mean envelope (or per channel).
    {
        auto td_of = [&](const std::vector<double>& sig) {
            try {
                return time_domain_features(sig, cfg.td);
            } catch (const Error& e) {
                warn("TDS", e.what());
                return std::vector<double>(21, 0.0);
            }
        };
        if (cfg.tds_per_channel) {
            for (int c = 0; c < channels; ++c) {
                std::vector<double> td = td_of(rows[static_cast<std::size_t>(c)]);
                std::copy(td.begin(), td.end(), values.begin() + pos);
                pos += 21;
            }
        } else {
            std::vector<double> mean_row(static_cast<std::size_t>(w), 0.0);
            for (int c = 0; c < channels; ++c)
                for (int n = 0; n < w; ++n) mean_row[static_cast<std::size_t>(n)] += rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)];
            for (double& v : mean_row) v /= channels;
            std::vector<double> td = td_of(mean_row);
            std::copy(td.begin(), td.end(), values.begin() + pos);
            pos += 21;
        }
    }

    // HOSA: per-channel second-order cumulants plus one fourth-order
    // cross-cumulant per channel group.
    for (int c = 0; c < channels; ++c)
        values[static_cast<std::size_t>(pos++)] = second_order_cumulant(rows[static_cast<std::size_t>(c)]);
    auto group_cum4 = [&](const std::array<int, 4>& g) {
        return fourth_order_cross_cumulant(rows[static_cast<std::size_t>(g[0])], rows[static_cast<std::size_t>(g[1])],
                                           rows[static_cast<std::size_t>(g[2])], rows[static_cast<std::size_t>(g[3])]);
    };
    values[static_cast<std::size_t>(pos++)] = group_cum4(cfg.hosa_group_a);
    values[static_cast<std::size_t>(pos++)] = group_cum4(cfg.hosa_group_b);

    for (double& v : values)
        if (!std::isfinite(v)) {
            warn("post", "non-finite feature value replaced by 0");
            v = 0.0;
        }

    FeatureVector fv;
    fv.values = std::move(values);
    fv.label = frame.action;
    fv.recording_id = frame.recording_id;
    fv.window_index = frame.window_index;
    return fv;
}

// ---------------------------------------------------------------------------
// Feature subsets
// ---------------------------------------------------------------------------

// A named union of feature families. Accepts the family spellings used in
// the report tables ('All', 'Time Based', 'Freq Based', 'ICS + Freq', ...).
struct FeatureSubsetSpec {
    std::string name;
    std::vector<Family> families; // unique, in layout order

    static FeatureSubsetSpec parse(const std::string& text) {
        auto canon = [](std::string s) {
            std::string out;
            for (char c : s)
                if (c != ' ' && c != '\t') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            return out;
        };
        std::vector<Family> fams;
        auto add = [&](Family f) {
            if (std::find(fams.begin(), fams.end(), f) == fams.end()) fams.push_back(f);
        };
        std::string token;
        std::vector<std::string> tokens;
        for (char c : text + "+") {
            if (c == '+') {
                tokens.push_back(token);
                token.clear();
            } else {
                token.push_back(c);
            }
        }
        for (const std::string& raw : tokens) {
            const std::string t = canon(raw);
            if (t.empty()) continue;
            if (t == "all") {
                add(Family::ICS);
                add(Family::PSD);
                add(Family::LMFS);
                add(Family::TDS);
                add(Family::HOSA);
            } else if (t == "ics") {
                add(Family::ICS);
            } else if (t == "psd") {
                add(Family::PSD);
            } else if (t == "lmf" || t == "lmfs") {
                add(Family::LMFS);
            } else if (t == "tds" || t == "time" || t == "timebased") {
                add(Family::TDS);
            } else if (t == "hosa") {
                add(Family::HOSA);
            } else if (t == "freq" || t == "freqbased") {
                add(Family::PSD);
                add(Family::LMFS);
            } else {
                throw ConfigError("unknown feature family '" + raw + "' in subset '" + text + "'");
            }
        }
        if (fams.empty()) throw ConfigError("empty feature subset '" + text + "'");
        std::sort(fams.begin(), fams.end(),
                  [](Family a, Family b) { return static_cast<int>(a) < static_cast<int>(b); });
        return FeatureSubsetSpec{text, fams};
    }
};

// Column indices selected by a subset, in layout order.
inline std::vector<int> subset_indices(const FeatureLayout& layout, const FeatureSubsetSpec& spec) {
    std::vector<int> idx;
    for (const auto& s : layout.slices)
        if (std::find(spec.families.begin(), spec.families.end(), s.family) != spec.families.end())
            for (int i = 0; i < s.count; ++i) idx.push_back(s.offset + i);
    return idx;
}

inline std::vector<double> select_subset(const FeatureVector& v, const FeatureLayout& layout,
                                         const FeatureSubsetSpec& spec) {
    if (static_cast<int>(v.values.size()) != layout.total())
        throw DimError("select_subset: vector length does not match layout");
    std::vector<int> idx = subset_indices(layout, spec);
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(v.values[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace emgaction
