#include "gwb/rng.hpp"

#include <cmath>
#include <numbers>

#include "gwb/errors.hpp"

namespace gwb {

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

double Rng::gamma(double alpha) {
  if (!(alpha > 0.0)) fail(Errc::out_of_range, "Rng::gamma: alpha must be positive");
  if (alpha < 1.0) {
    const double u = 1.0 - uniform01();  // (0, 1]
    return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01();  // (0, 1]
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) fail(Errc::out_of_range, "Rng::uniform_int: n must be positive");
  const std::uint64_t bound = n * ((~std::uint64_t{0}) / n);
  while (true) {
    const std::uint64_t x = next_u64();
    if (x < bound) return x % n;
  }
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

}  // namespace gwb
