#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emgaction/errors.hpp"
#include "emgaction/fft.hpp"
#include "emgaction/recording.hpp"

namespace emgaction {

struct WindowingConfig {
    int window_length = 1000;
    double overlap = 0.25;

    int stride() const {
        return static_cast<int>(std::lround(window_length * (1.0 - overlap)));
    }

    void validate() const {
        if (window_length < 2) throw ConfigError("window_length must be >= 2");
        if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("overlap must be in [0, 1)");
        if (stride() < 1) throw ConfigError("window/overlap combination gives stride < 1");
    }
};

// One C x W windowed envelope matrix; the unit of feature extraction.
struct SegmentFrame {
    Eigen::MatrixXd data; // channels x window_length, all values >= 0
    std::string recording_id;
    int window_index = 0;
    ActionLabel action;

    int channel_count() const { return static_cast<int>(data.rows()); }
    int window_length() const { return static_cast<int>(data.cols()); }
};

// Envelope via the analytic signal: the input is zero-padded to the next
// power of two, negative frequencies are zeroed and positive ones doubled,
// and the magnitude is taken over the original support. The real part of the
// analytic signal is the input itself, so |x[n]| is a hard lower bound; we
// use the original sample for the real part to keep that bound exact.
inline std::vector<double> upper_envelope(const std::vector<double>& x) {
    if (x.size() < 2) throw TooShortError("upper_envelope: need at least 2 samples");
    for (double v : x)
        if (!std::isfinite(v)) throw NonFiniteError("upper_envelope: non-finite input sample");

    const std::size_t n = fft::next_pow2(x.size());
    std::vector<fft::cplx> a = fft::forward_real(x, n);

    // Analytic-signal weighting: keep DC and Nyquist, double positives, zero negatives.
    for (std::size_t k = 1; k < n / 2; ++k) a[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) a[k] = fft::cplx(0.0, 0.0);
    fft::transform_pow2(a, true);

    std::vector<double> env(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) env[i] = std::hypot(x[i], a[i].imag());
    return env;
}

// Fixed-length overlapping windows. Window k covers [k*stride, k*stride + W);
// the trailing remainder shorter than W is dropped.
inline std::vector<std::vector<double>> segment(const std::vector<double>& x,
                                                const WindowingConfig& cfg) {
    cfg.validate();
    const int w = cfg.window_length;
    const int stride = cfg.stride();
    const int len = static_cast<int>(x.size());
    if (len < w)
        throw TooShortError("segment: signal length " + std::to_string(len) +
                            " shorter than window " + std::to_string(w));
    const int count = (len - w) / stride + 1;
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        auto begin = x.begin() + static_cast<std::ptrdiff_t>(k) * stride;
        out.emplace_back(begin, begin + w);
    }
    return out;
}

// Envelope is computed per channel over the full recording before windowing
// so that no window sees transform edge artifacts from its own boundary.
inline std::vector<SegmentFrame> preprocess_recording(const Recording& rec,
                                                      const WindowingConfig& cfg) {
    cfg.validate();
    rec.validate(cfg.window_length);

    const int channels = rec.channel_count();
    std::vector<std::vector<std::vector<double>>> windows(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c)
        windows[static_cast<std::size_t>(c)] =
            segment(upper_envelope(rec.channels[static_cast<std::size_t>(c)]), cfg);

    const std::size_t count = windows.front().size();
    std::vector<SegmentFrame> frames;
    frames.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SegmentFrame f;
        f.data.resize(channels, cfg.window_length);
        for (int c = 0; c < channels; ++c)
            for (int n = 0; n < cfg.window_length; ++n)
                f.data(c, n) = windows[static_cast<std::size_t>(c)][k][static_cast<std::size_t>(n)];
        f.recording_id = rec.id;
        f.window_index = static_cast<int>(k);
        f.action = rec.action;
        frames.push_back(std::move(f));
    }
    return frames;
}

} // namespace emgaction
