#pragma once

#include <cmath>
#include <cstdint>

#include "weakdiscord/core.hpp"

namespace weakdiscord {

/// splitmix64 finalizer; bijective 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator with identical output on every platform. The
/// standard-library distributions are implementation-defined, so uniform and
/// normal variates are produced by hand: splitmix64 for the raw stream,
/// Box-Muller for normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1]; never returns 0, so log() is always safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = uniform01();
    double v = uniform01();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * kPi * v);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * v);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Independent stream for one sample index. Streams depend only on
/// (master_seed, index), so results are identical for any worker count or
/// scheduling order.
inline Rng stream_rng(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(mix64(master_seed ^ mix64(index)));
}

}  // namespace weakdiscord
