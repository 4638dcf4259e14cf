#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace emgaction {

// SplitMix64 generator. Chosen over std::mt19937 + distributions because the
// standard distributions are implementation-defined; this keeps every random
// draw bit-identical across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Uniform integer in [0, n). Modulo bias is irrelevant at our sizes.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Expands a master seed into independent per-stage streams. The stream tag is
// hashed (FNV-1a) so call sites can use readable names.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& stream, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : stream) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    Rng mix(master ^ h);
    mix.next();
    std::uint64_t s = mix.next() ^ (0x9e3779b97f4a7c15ull * (index + 1));
    Rng mix2(s);
    mix2.next();
    return mix2.next();
}

// Fisher-Yates with our own generator so shuffles are platform-stable.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace emgaction
