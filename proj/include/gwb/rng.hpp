#pragma once

#include <cstdint>
#include <random>

namespace gwb {

// Deterministic random source. All distribution transforms are implemented on
// top of the raw mt19937_64 stream so draws are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal();

  // Gamma(alpha, 1) via Marsaglia-Tsang squeeze. Requires alpha > 0.
  double gamma(double alpha);

  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

  // Uniform integer in [0, n), rejection sampled. Requires n > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  // Stream splitting: a stable per-index seed derived from a master seed.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace gwb
