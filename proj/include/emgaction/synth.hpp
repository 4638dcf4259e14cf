#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "emgaction/errors.hpp"
#include "emgaction/fft.hpp"
#include "emgaction/recording.hpp"
#include "emgaction/rng.hpp"

namespace emgaction {

struct Carrier {
    double freq_hz = 0.0;
    double amplitude = 0.0;

    friend bool operator==(const Carrier&, const Carrier&) = default;
};

// Generative parameters for one action class. Classes separate along three
// axes so every feature family has discriminative signal: carrier content
// (spectral), burst rate and duty (temporal), and the per-channel gain
// profile plus noise level (inter-channel).
struct SynthClassSpec {
    std::string name;
    std::vector<Carrier> carriers;     // 1-2 sinusoidal carriers
    double burst_rate_hz = 0.0;        // 0 = steady activity
    double burst_duty = 0.5;           // active fraction of a burst cycle
    double inter_channel_lag_s = 0.0;  // burst onset lag from channel to channel
    double noise_power = 0.01;         // variance of the band-limited noise
    double noise_band_lo_hz = 10.0;
    double noise_band_hi_hz = 120.0;
    std::vector<double> channel_gains; // cycled if shorter than channel count

    friend bool operator==(const SynthClassSpec&, const SynthClassSpec&) = default;
};

struct SynthSpec {
    int channels = 8;
    int samples_per_recording = 10000;
    int recordings_per_class = 4;
    double sample_rate_hz = 1000.0;
    double noise_scale = 1.0; // global multiplier on every class's noise power
    std::vector<SynthClassSpec> classes;

    void validate() const {
        if (channels < 2) throw ConfigError("synth: need at least 2 channels");
        if (samples_per_recording < 16) throw ConfigError("synth: recording too short");
        if (recordings_per_class < 1) throw ConfigError("synth: need at least 1 recording per class");
        if (classes.size() < 2) throw DegenerateSpecError("synth: need at least 2 classes");
        for (std::size_t a = 0; a < classes.size(); ++a)
            for (std::size_t b = a + 1; b < classes.size(); ++b) {
                SynthClassSpec lhs = classes[a], rhs = classes[b];
                lhs.name = rhs.name = "";
                if (lhs == rhs)
                    throw DegenerateSpecError("synth: classes '" + classes[a].name + "' and '" +
                                              classes[b].name + "' have identical parameters");
            }
    }

    // The bundled 4-action analog of the paper's private dataset.
    static SynthSpec default_spec() {
        SynthSpec s;
        s.classes = {
            {"Typing",
             {{35.0, 1.0}, {55.0, 0.6}},
             6.0, 0.45, 0.004,
             0.050, 40.0, 150.0,
             {1.2, 1.0, 0.8, 0.6, 0.5, 0.4, 0.35, 0.3}},
            {"Rest",
             {{20.0, 0.12}},
             0.0, 0.5, 0.0,
             0.012, 10.0, 60.0,
             {0.25, 0.25, 0.22, 0.22, 0.2, 0.2, 0.18, 0.18}},
            {"Lifting",
             {{25.0, 1.2}},
             1.5, 0.7, 0.010,
             0.080, 15.0, 80.0,
             {0.3, 0.4, 0.5, 0.7, 0.9, 1.0, 1.1, 1.2}},
            {"Pushups",
             {{45.0, 1.0}, {18.0, 0.5}},
             0.8, 0.5, 0.020,
             0.120, 20.0, 120.0,
             {0.5, 0.9, 1.2, 0.9, 0.5, 0.9, 1.2, 0.9}},
        };
        return s;
    }
};

namespace detail {

// Band-limited Gaussian noise: white noise is masked in the frequency domain
// to [lo, hi] Hz and rescaled to the requested standard deviation.
inline std::vector<double> bandlimited_noise(int n, double fs, double lo_hz, double hi_hz,
                                             double target_sd, Rng& rng) {
    const std::size_t m = fft::next_pow2(static_cast<std::size_t>(n));
    std::vector<fft::cplx> buf(m);
    for (std::size_t i = 0; i < m; ++i) buf[i] = fft::cplx(rng.gaussian(), 0.0);
    fft::transform_pow2(buf, false);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(m);
        if (f < lo_hz || f > hi_hz || k == 0) {
            buf[k] = fft::cplx(0.0, 0.0);
            if (k != 0 && k != m / 2) buf[m - k] = fft::cplx(0.0, 0.0);
        }
    }
    fft::transform_pow2(buf, true);

    std::vector<double> out(static_cast<std::size_t>(n));
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(i)].real();
        mean += out[static_cast<std::size_t>(i)];
    }
    mean /= n;
    double var = 0.0;
    for (double v : out) var += (v - mean) * (v - mean);
    var /= n;
    const double scale = var > 0.0 ? target_sd / std::sqrt(var) : 0.0;
    for (double& v : out) v = (v - mean) * scale;
    return out;
}

// Smooth periodic burst envelope in [floor, 1]; rate 0 gives steady activity.
inline double burst_envelope(double t, double rate_hz, double duty, double phase) {
    constexpr double floor_level = 0.15;
    if (rate_hz <= 0.0) return 1.0;
    double cycle = t * rate_hz + phase;
    cycle -= std::floor(cycle);
    if (cycle >= duty) return floor_level;
    const double s = std::sin(3.141592653589793238462643383279502884 * cycle / duty);
    return floor_level + (1.0 - floor_level) * s * s;
}

} // namespace detail

// Deterministic function of (spec, seed): every random draw comes from
// streams derived from the seed and the class/recording/channel indices.
inline std::vector<Recording> generate_synthetic_dataset(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    const double fs = spec.sample_rate_hz;
    const int n = spec.samples_per_recording;

    std::vector<Recording> out;
    for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
        const SynthClassSpec& cls = spec.classes[ci];
        for (int r = 0; r < spec.recordings_per_class; ++r) {
            Rng rec_rng(derive_seed(seed, "synth-recording", ci * 1009 + static_cast<std::uint64_t>(r)));
            const double burst_phase = rec_rng.uniform();

            Recording rec;
            rec.id = cls.name + "_r" + std::to_string(r);
            rec.action = ActionLabel{cls.name, static_cast<int>(ci)};
            rec.sample_rate_hz = fs;
            rec.channels.resize(static_cast<std::size_t>(spec.channels));

            for (int ch = 0; ch < spec.channels; ++ch) {
                Rng ch_rng(derive_seed(seed, "synth-channel",
                                       (ci * 1009 + static_cast<std::uint64_t>(r)) * 131 +
                                           static_cast<std::uint64_t>(ch)));
                const double gain =
                    cls.channel_gains.empty()
                        ? 1.0
                        : cls.channel_gains[static_cast<std::size_t>(ch) % cls.channel_gains.size()] *
                              ch_rng.uniform(0.9, 1.1);
                std::vector<double> phases(cls.carriers.size());
                for (double& p : phases) p = ch_rng.uniform(0.0, 1.0);

                const double noise_sd = std::sqrt(cls.noise_power * spec.noise_scale);
                std::vector<double> noise = detail::bandlimited_noise(
                    n, fs, cls.noise_band_lo_hz, cls.noise_band_hi_hz, noise_sd, ch_rng);

                const double ch_phase = burst_phase + cls.inter_channel_lag_s * cls.burst_rate_hz * ch;
                std::vector<double>& sig = rec.channels[static_cast<std::size_t>(ch)];
                sig.resize(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    const double t = static_cast<double>(i) / fs;
                    double carrier = 0.0;
                    for (std::size_t j = 0; j < cls.carriers.size(); ++j)
                        carrier += cls.carriers[j].amplitude *
                                   std::cos(2.0 * 3.141592653589793238462643383279502884 *
                                            (cls.carriers[j].freq_hz * t + phases[j]));
                    const double burst =
                        detail::burst_envelope(t, cls.burst_rate_hz, cls.burst_duty, ch_phase);
                    sig[static_cast<std::size_t>(i)] = gain * carrier * burst + noise[static_cast<std::size_t>(i)];
                }
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace emgaction
