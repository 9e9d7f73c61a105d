#pragma once

// Reproducible integer draws.
//
// The stream is std::mt19937_64 (its output sequence is fixed by the C++
// standard) seeded with the 64-bit seed. A draw in [-bound, bound] takes raw
// 64-bit outputs u, rejects u >= floor(2^64 / r) * r with r = 2*bound + 1, and
// returns (u mod r) - bound. No std::*_distribution is involved, so the
// sequence is identical across standard libraries.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace acf {

class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::int64_t uniform_symmetric(std::uint64_t bound) {
    if (bound == 0) return 0;
    if (bound > (std::uint64_t{1} << 62)) throw std::invalid_argument("bound too large");
    const std::uint64_t range = 2 * bound + 1;
    const std::uint64_t limit = (UINT64_MAX / range) * range;
    std::uint64_t u;
    do {
      u = engine_();
    } while (u >= limit);
    return static_cast<std::int64_t>(u % range) - static_cast<std::int64_t>(bound);
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to derive replacement seeds deterministically.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace acf
