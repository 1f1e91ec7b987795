#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace padlin {

// splitmix64 finalizer; full-period 64-bit mixer
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Key for an independent substream addressed by (master, a, b, c).
// Streams with different addresses never share draws, so results do not
// depend on execution order or worker count.
inline std::uint64_t derive_key(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b, std::uint64_t c) {
    std::uint64_t k = mix64(master + kGolden);
    k = mix64(k ^ mix64(a + 2 * kGolden));
    k = mix64(k ^ mix64(b + 3 * kGolden));
    k = mix64(k ^ mix64(c + 5 * kGolden));
    return k;
}

// Counter-based generator: draw i is mix64(key + golden*i), i.e. the
// splitmix64 sequence seeded at `key`. State is one counter; identical
// across platforms for the same key.
struct CounterStream {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    CounterStream() = default;
    explicit CounterStream(std::uint64_t k) : key(k) {}

    std::uint64_t next_u64() { return mix64(key + kGolden * ++counter); }

    // uniform on (0, 1]; never 0 so log() below is safe
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
    }

    // one circular Gaussian sample, unit variance per complex dimension
    // (variance 1/2 per real component), Box-Muller
    std::complex<double> next_gaussian_pair() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(a) * 0.70710678118654752440,
                r * std::sin(a) * 0.70710678118654752440};
    }
};

} // namespace padlin
