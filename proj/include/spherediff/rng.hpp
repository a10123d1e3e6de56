#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "spherediff/sphere.hpp"

namespace spherediff {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// One reproducible random stream. Streams are derived counter-style from
/// (seed, stream_id), so worker k of a parallel run owns stream k and the
/// ensemble is reproducible for a fixed worker count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                   detail::splitmix64(stream_id + 0x5851F42D4C957F2Dull))) {}

  double uniform() { return unif_(engine_); }
  double normal() { return normal_(engine_); }
  double exponential() { return exp_(engine_); }
  double gamma(double shape) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::exponential_distribution<double> exp_{1.0};
};

/// Kanter's sampler for the positive alpha-stable law with Laplace
/// transform e^{-lambda^alpha}, alpha in (0, 1).
inline double positive_stable(double alpha, RngStream& rng) {
  double u = pi * rng.uniform();
  double e = rng.exponential();
  while (u <= 0.0 || e <= 0.0) {  // guard the measure-zero edges
    u = pi * rng.uniform();
    e = rng.exponential();
  }
  double log_a = (alpha * std::log(std::sin(alpha * u)) +
                  (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * u)) -
                  std::log(std::sin(u))) /
                 (1.0 - alpha);
  return std::exp(((1.0 - alpha) / alpha) * (log_a - std::log(e)));
}

}  // namespace spherediff
