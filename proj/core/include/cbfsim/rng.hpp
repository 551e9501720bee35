#pragma once

#include <cmath>
#include <cstdint>

namespace cbfsim::rng {

// Counter-based keyed randomness. Every draw in a simulation is addressable
// as (seed, step, component): keys are derived by `split`, never by sharing
// mutable generator state across components. Same key => same stream.

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer (Vigna)
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

struct Key {
  std::uint64_t bits = 0;
};

inline Key key_from_seed(std::uint64_t seed) { return Key{detail::mix64(seed)}; }

/// Derive the i-th child key. Children of distinct (key, i) pairs are
/// decorrelated by the splitmix64 avalanche.
inline Key split(Key k, std::uint64_t i) {
  return Key{detail::mix64(k.bits ^ detail::mix64(i + 0x517cc1b727220a95ull))};
}

/// Seed-level split used by Monte Carlo trials: trial i runs with
/// split_seed(base_seed, i).
inline std::uint64_t split_seed(std::uint64_t base_seed, std::uint64_t i) {
  return split(key_from_seed(base_seed), i).bits;
}

/// Sequential stream over a key. Draw order is part of the stream contract.
class Stream {
 public:
  explicit Stream(Key k) : state_(k.bits) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    // shift into (0, 1] so log() stays finite
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

// Component tags for per-step key derivation inside the simulator.
inline constexpr std::uint64_t kSensorTag = 1;
inline constexpr std::uint64_t kPerturbationTag = 2;

}  // namespace cbfsim::rng
