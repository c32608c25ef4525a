#pragma once

#include <cmath>
#include <cstdint>

namespace leadtime {

// SplitMix64. Chosen over std::mt19937 because every bit of the stream is
// pinned by the constants below, so fixtures generated here are identical
// on every platform and standard library.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never 0, so it is safe under log().
    double next_unit_positive() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

    // Uniform on [0, 1).
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1p-53;
    }

private:
    std::uint64_t state_;
};

// Standard normal via Box-Muller. Consumes exactly two draws per sample and
// never caches the paired sine value, keeping the stream position a pure
// function of the sample count.
inline double sample_normal(SplitMix64& rng) {
    const double u1 = rng.next_unit_positive();
    const double u2 = rng.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double sample_half_normal(SplitMix64& rng, double sigma) {
    return sigma * std::abs(sample_normal(rng));
}

// Independent sub-stream seed for (seed, a, b); used so per-month/market
// generation is schedule-independent under parallel execution.
inline std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) {
    SplitMix64 mixer(seed ^ (a * 0x9E3779B97F4A7C15ull) ^
                     (b * 0xC2B2AE3D27D4EB4Full));
    mixer.next();
    return mixer.next();
}

} // namespace leadtime
