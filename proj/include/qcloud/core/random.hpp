#pragma once

#include <cstdint>
#include <random>

namespace qcloud {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution the result is identical across standard
/// library implementations.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

inline double uniform(Rng &rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    // Lemire's multiply-shift; bias is below 2^-64 * n.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64U);
}

/// Derive an independent seed for stream `k` of a base seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

} // namespace qcloud
