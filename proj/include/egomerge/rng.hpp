#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace egomerge {

// Sampling helpers written out explicitly so that seeded streams are stable
// across standard-library versions. All randomness in this library flows
// through these functions and a single mt19937_64 per task.

inline std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t bound) {
    // bound > 0; returns value in [0, bound) with rejection to avoid modulo bias
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    return uniform01(rng) < p;
}

inline std::uint32_t poisson(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    // Knuth's product method; fine for the small means used here
    const double limit = std::exp(-mean);
    std::uint32_t k = 0;
    double prod = uniform01(rng);
    while (prod > limit) {
        ++k;
        prod *= uniform01(rng);
    }
    return k;
}

}  // namespace egomerge
