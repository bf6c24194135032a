#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace alsim {

/// splitmix64 step; used both as a hash-style seed combiner and to expand
/// a single seed into independent substream seeds.
inline std::uint64_t seed_mix(std::uint64_t state, std::uint64_t salt) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t s, std::uint64_t a, std::uint64_t b) {
  return seed_mix(seed_mix(s, a), b);
}

inline std::uint64_t seed_mix(std::uint64_t s, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return seed_mix(seed_mix(seed_mix(s, a), b), c);
}

// Substream tags. Every consumer of randomness derives its own seed from
// these, so the simulation streams stay independent of which method runs
// or in what order the consumers fire.
namespace seed_tag {
inline constexpr std::uint64_t kPrototypes = 0x01;
inline constexpr std::uint64_t kStream = 0x02;
inline constexpr std::uint64_t kPoseCoeffs = 0x03;
inline constexpr std::uint64_t kViewNoise = 0x04;
inline constexpr std::uint64_t kOverhead = 0x05;
inline constexpr std::uint64_t kDetector = 0x06;
inline constexpr std::uint64_t kPretrain = 0x07;
inline constexpr std::uint64_t kTestset = 0x08;
inline constexpr std::uint64_t kMethod = 0x09;
inline constexpr std::uint64_t kTrain = 0x0a;
inline constexpr std::uint64_t kPreload = 0x0b;
}  // namespace seed_tag

/// Deterministic random source: std::mt19937_64 (bit sequence fixed by the
/// standard) plus hand-written transforms, so every drawn value is pinned
/// by this file rather than by the platform's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Uniform index in [0, n); multiply-shift, bias < n / 2^64.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alsim
