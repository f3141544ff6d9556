#pragma once

#include <cstdint>
#include <random>

namespace clucert {

/// SplitMix64 finalizer; used to derive well-mixed stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic per-replicate seed: mixing the experiment seed with the
/// replicate counter keeps replicates independent of scheduling order.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t replicate) {
    return splitmix64(splitmix64(seed) ^ splitmix64(replicate + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace clucert
