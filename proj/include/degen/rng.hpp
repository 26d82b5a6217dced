#pragma once

#include <cmath>
#include <cstdint>

namespace degen {

// SplitMix64 (Steele/Lea/Flood). Cheap enough to re-seed per trial, which is
// how the simulation layer gets reproducible parallelism: every
// (seed, trial, purpose) triple owns its own stream and no stream is shared.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0,1), 53-bit resolution
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0,1]; safe as a log() argument
  double uniform01_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // standard normal via Box-Muller; consumes two words per call
  double standard_normal() {
    double r = std::sqrt(-2.0 * std::log(uniform01_pos()));
    return r * std::cos(6.28318530717958647692 * uniform01());
  }
};

inline std::uint64_t hash64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Disjoint deterministic stream for one (trial, purpose) of a seeded run.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t trial,
                                std::uint64_t purpose) {
  return SplitMix64(hash64(hash64(seed, trial), purpose));
}

}  // namespace degen
