#pragma once

#include <cmath>
#include <cstdint>

namespace mimic {

// Deterministic random stream (splitmix64 core). All sampling in the
// pipeline goes through this so that artifacts are reproducible across
// standard-library versions, which do not pin distribution algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
  // so the stream position is a simple function of the draw count.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

  // Derive an independent stream, e.g. per worker or per episode.
  static Rng derive(uint64_t base_seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    Rng mix(base_seed);
    uint64_t s = mix.next_u64();
    s ^= a * 0x9e3779b97f4a7c15ULL;
    s = (s ^ (s >> 29)) * 0xff51afd7ed558ccdULL;
    s ^= b * 0xc2b2ae3d27d4eb4fULL;
    s = (s ^ (s >> 32)) * 0xc4ceb9fe1a85ec53ULL;
    s ^= c * 0x9e3779b97f4a7c15ULL;
    return Rng(s);
  }

 private:
  uint64_t state_;
};

}  // namespace mimic
