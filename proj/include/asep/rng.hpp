#pragma once

#include <cstdint>

namespace asep {

// Deterministic, platform-independent generators. The exact output streams
// are part of the construction contract: identical seeds must reproduce
// identical matrices everywhere, so we pin splitmix64 + xoshiro256** rather
// than rely on <random> engines/distributions.

/// One splitmix64 step starting from state v.
inline std::uint64_t mix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = v;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0,1): top 53 bits scaled by 2^-53.
  double uniform53() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound) via 128-bit multiply with rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      const auto mul = static_cast<unsigned __int128>(r) * bound;
      if (static_cast<std::uint64_t>(mul) >= threshold)
        return static_cast<std::uint64_t>(mul >> 64);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

/// Seed for trial (or design) `index` within a run keyed by `master`.
/// Derivation is scheduling-independent, so parallel trial loops reproduce
/// the single-threaded results exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ index);
}

}  // namespace asep
