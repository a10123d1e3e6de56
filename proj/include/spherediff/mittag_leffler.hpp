#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "spherediff/laplace.hpp"

namespace spherediff {

struct MlResult {
  std::complex<double> value;
  double err;  // achieved absolute accuracy estimate
  bool ok;     // false when the target accuracy could not be certified
};

/// Power-series / continuation switch point. Pinned by a seam-continuity
/// test; below the cancellation guard kicks in for small alpha, where the
/// series loses too many digits even inside this radius.
inline constexpr double ml_series_radius = 5.0;

namespace detail {

inline constexpr double ml_target_rel = 1e-8;

struct SeriesAttempt {
  std::complex<double> value;
  double peak;  // largest intermediate magnitude, bounds the cancellation loss
  bool converged;
};

/// Extended precision keeps the cancellation loss near peak * 1e-18, which
/// buys roughly three extra usable digits at the series boundary.
inline SeriesAttempt ml_series(double alpha, std::complex<double> z) {
  std::complex<long double> zl(z.real(), z.imag());
  std::complex<long double> sum = 1.0L, power = 1.0L;
  double peak = 1.0;
  for (int k = 1; k <= 2000; ++k) {
    power *= zl;
    long double lg = lgammal(alpha * (long double)k + 1.0L);
    std::complex<long double> contrib = power * expl(-lg);
    sum += contrib;
    double mag = double(std::abs(contrib));
    peak = std::max(peak, std::max(mag, double(std::abs(sum))));
    if (mag < 1e-20 * (double(std::abs(sum)) + 1.0) && double(k) > std::abs(z))
      return {{double(sum.real()), double(sum.imag())}, peak, true};
  }
  return {{double(sum.real()), double(sum.imag())}, peak, false};
}

/// Asymptotic tail -sum_k z^{-k} / Gamma(1 - alpha k), valid for
/// |arg z| > alpha pi; terms at the Gamma poles vanish.
inline MlResult ml_asymptotic(double alpha, std::complex<double> z) {
  std::complex<double> sum = 0.0;
  std::complex<double> zinv = 1.0 / z;
  std::complex<double> zp = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  double err = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 60; ++k) {
    zp *= zinv;
    double a = 1.0 - alpha * k;
    double near_int = std::abs(a - std::round(a));
    std::complex<double> term = 0.0;
    if (!(a <= 0.0 && near_int < 1e-9)) term = zp / std::tgamma(a);
    double mag = std::abs(term);
    if (mag > prev) {  // divergent tail reached; stop at the smallest term
      err = prev;
      break;
    }
    sum -= term;
    prev = (mag > 0.0) ? mag : prev;
    err = mag;
    if (mag < 1e-16 * std::abs(sum)) break;
  }
  return {sum, err, err <= ml_target_rel * std::max(1.0, std::abs(sum))};
}

inline MlResult ml_laplace(double alpha, std::complex<double> z) {
  auto F = [alpha, z](std::complex<double> s) {
    std::complex<double> sa = std::pow(s, alpha);
    return sa / (s * (sa - z));
  };
  auto inv = talbot_inverse_checked(F, 1.0, 32);
  return {inv.value, inv.err, inv.err <= 1e-7 * std::max(1.0, std::abs(inv.value))};
}

}  // namespace detail

/// Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1),
/// alpha in (0, 1]. Power series inside |z| <= ml_series_radius, switching
/// to continuation (asymptotic tail or Laplace inversion of
/// s^{alpha-1}/(s^alpha - z)) beyond it or when series cancellation would
/// cost more than ~6 digits. Target relative accuracy 1e-8 on Re z <= 0.
inline MlResult mittag_leffler(double alpha, std::complex<double> z) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("mittag_leffler: alpha must be in (0, 1]");
  if (z == std::complex<double>(0.0)) return {1.0, 0.0, true};
  if (alpha == 1.0) {
    std::complex<double> v = std::exp(z);
    return {v, 1e-15 * std::abs(v), true};
  }

  const double az = std::abs(z);
  const bool left_half = z.real() <= 1e-12;

  if (az <= ml_series_radius) {
    auto s = detail::ml_series(alpha, z);
    double loss = s.peak * 1e-17;
    if (s.converged && loss <= detail::ml_target_rel * std::max(1.0, std::abs(s.value)))
      return {s.value, loss, true};
    if (left_half) return detail::ml_laplace(alpha, z);
    return {s.value, loss, false};
  }

  if (az >= 1e3 && std::abs(std::arg(z)) >= alpha * pi + 0.3) {
    auto a = detail::ml_asymptotic(alpha, z);
    if (a.ok) return a;
  }
  if (left_half) return detail::ml_laplace(alpha, z);

  // Right half-plane beyond the series radius is outside the contract.
  auto s = detail::ml_series(alpha, z);
  return {s.value, s.peak * 1e-15, false};
}

inline std::complex<double> mittag_leffler_value(double alpha, std::complex<double> z) {
  return mittag_leffler(alpha, z).value;
}

}  // namespace spherediff
