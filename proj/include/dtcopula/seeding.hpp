#pragma once

#include <cstdint>

namespace dtcopula {

/// Seed for stream `index` under master seed `seed` (splitmix64 finalizer
/// over the combined words). Streams for distinct indices are unrelated, so
/// replicate b draws the same numbers whether it runs first, last or on
/// another thread.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dtcopula
