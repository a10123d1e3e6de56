#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spherediff {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2*pi).
inline double wrap_longitude(double phi) {
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  // fmod can return two_pi after the correction when phi is a tiny negative
  if (w >= two_pi) w -= two_pi;
  return w;
}

/// A point on the unit sphere, stored as colatitude/longitude.
/// theta in [0, pi], phi in [0, 2*pi). At the poles phi is canonically 0.
class SphericalPoint {
 public:
  SphericalPoint() = default;

  SphericalPoint(double theta, double phi) : theta_(theta), phi_(wrap_longitude(phi)) {
    if (!(theta >= 0.0 && theta <= pi))
      throw std::domain_error("SphericalPoint: theta outside [0, pi]");
    if (theta_ == 0.0 || theta_ == pi) phi_ = 0.0;
  }

  static SphericalPoint from_unit_vector(const std::array<double, 3>& v) {
    double theta = std::acos(std::clamp(v[2], -1.0, 1.0));
    double phi = std::atan2(v[1], v[0]);
    return {theta, phi};
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  std::array<double, 3> unit_vector() const {
    double st = std::sin(theta_);
    return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
  }

  double cos_theta() const { return std::cos(theta_); }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

inline double dot(const SphericalPoint& x, const SphericalPoint& y) {
  auto a = x.unit_vector();
  auto b = y.unit_vector();
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// (theta, phi) -> (theta, phi + delta), the longitudinal rotation x_t^mu.
inline SphericalPoint rotate_longitude(const SphericalPoint& x, double delta) {
  return {x.theta(), wrap_longitude(x.phi() + delta)};
}

}  // namespace spherediff
