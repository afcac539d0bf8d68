#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace b2o {

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream derived from (root seed, purpose label, index).
/// All derived quantities use hand-rolled conversions from the mt19937_64
/// word stream so that output is identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view label, std::uint64_t index = 0)
      : gen_(mix64(mix64(root_seed ^ fnv1a64(label)) + index)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Rejection sampling over a power-of-two mask.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t x = next_u64() & mask;
      if (x < n) return x;
    }
  }

  double next_uniform(double a, double b) { return a + (b - a) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

  /// +1 or -1 with equal probability.
  int rademacher() { return (next_u64() & 1) ? 1 : -1; }

  /// In-place Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace b2o
