#pragma once

#include <cstdint>
#include <random>

namespace phaselearn {

/// SplitMix64 finalizer; used to derive independent per-item seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-index seed for batched work: base XOR the index hash. Items keep the
/// same seed no matter how the batch is scheduled.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    return base ^ splitmix64(index);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

} // namespace phaselearn
