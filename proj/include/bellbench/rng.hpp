#pragma once

#include <cstdint>
#include <random>

namespace bellbench {

/// @brief SplitMix64 finalizer; decorrelates nearby integer seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// @brief Deterministic substream seed for a (set, setting) work item.
///
/// Every interval draws from its own stream derived only from the run seed
/// and its indices, so results do not depend on scheduling or thread count.
inline std::uint64_t substream_seed(std::uint64_t run_seed, int set,
                                    int setting) {
  return mix64(run_seed ^ mix64(static_cast<std::uint64_t>(set) * 16u +
                                static_cast<std::uint64_t>(setting) + 1u));
}

/// @brief Engine for one substream.
inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(mix64(seed));
}

}  // namespace bellbench
