// Deterministic random draws for network/scenario generation.
//
// std::uniform_int_distribution is implementation-defined, so bounded draws
// are done by rejection sampling on the raw mt19937_64 stream. Same seed,
// same sequence, on every platform.

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace platoonsim {

using Rng = std::mt19937_64;

/// Unbiased draw from [0, n). n must be > 0.
inline std::uint64_t bounded_u64(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % n;
}

/// Uniform integer in [lo, hi], inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  bounded_u64(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// In-place Fisher-Yates shuffle with the deterministic bounded draw.
template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded_u64(rng, i)]);
  }
}

}  // namespace platoonsim
