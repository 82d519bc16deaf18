#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sistab/numeric.hpp"

namespace sistab {

/// Default seed used by the CLI when none is given, so that bare
/// invocations are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 42;

// splitmix64 finalizer; full-period bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed for the substream `index` of the stream rooted at `seed`.
/// Draw i always uses substream (seed, i), so results do not depend on
/// execution order or worker count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index ^ 0xD2B74407B1CE6E93ull));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(derive_stream(seed, index));
}

/// Unbiased uniform draw from [lo, hi], both ends inclusive.
/// Rejection on the low words keeps the draw exactly uniform and
/// bit-reproducible (std::uniform_int_distribution is not portable).
inline Int uniform_int(Rng& g, Int lo, Int hi) {
  if (lo > hi) throw InvalidInput("uniform_int: empty range");
  const std::uint64_t range =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) {  // full 64-bit span
    return static_cast<Int>(g.next());
  }
  const std::uint64_t reject_below = (0 - range) % range;  // 2^64 mod range
  for (;;) {
    const std::uint64_t x = g.next();
    if (x >= reject_below) return lo + static_cast<Int>(x % range);
  }
}

/// Uniform double in [0,1) with 53 random bits.
inline double uniform_unit(Rng& g) {
  return static_cast<double>(g.next() >> 11) * 0x1.0p-53;
}

/// Knuth's product-of-uniforms Poisson sampler; fine for desk-scale lambda.
inline Int poisson(Rng& g, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("poisson: lambda must be positive");
  const double limit = std::exp(-lambda);
  Int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform_unit(g);
  } while (p > limit);
  return k - 1;
}

}  // namespace sistab
