#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace stablesim {

// splitmix64: used to derive independent per-run seeds from one master seed,
// so sweep members stay reproducible regardless of execution order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// master seed + run index -> engine seed. Documented in the README; frozen by tests.
inline uint64_t derive_seed(uint64_t master, uint64_t run_index) {
    return splitmix64(master ^ splitmix64(run_index + 1));
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    // 53-bit mantissa draw in [0,1); avoids std::uniform_real_distribution so the
    // stream is identical across standard library implementations.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exponential draw with the given mean (inverse-CDF method, hand-rolled for the
// same portability reason).
inline double exponential(Rng& rng, double mean) {
    if (!(mean > 0)) throw std::domain_error("exponential: mean must be positive");
    double u = uniform01(rng);
    return -mean * std::log1p(-u);
}

}  // namespace stablesim
