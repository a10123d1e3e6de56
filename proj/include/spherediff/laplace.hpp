#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "spherediff/sphere.hpp"

namespace spherediff {

using laplace_fn = std::function<std::complex<double>(std::complex<double>)>;

/// Inverse Laplace transform on the fixed Talbot contour
///   s(theta) = r * theta * (cot(theta) + i),  theta in (-pi, pi),  r = 2M/(5t),
/// with a 2M-point midpoint rule over the full contour. Using both half
/// contours keeps the formula valid for complex-valued originals, where the
/// conjugate symmetry F(conj s) = conj F(s) is unavailable.
///
/// Requires F analytic to the right of the negative real axis (branch cuts
/// and poles on or hugging (-inf, 0] stay inside the contour horn).
inline std::complex<double> talbot_inverse(const laplace_fn& F, double t, int m = 32) {
  if (!(t > 0.0)) throw std::domain_error("talbot_inverse: t must be > 0");
  if (m < 4) throw std::domain_error("talbot_inverse: m must be >= 4");

  const double r = 2.0 * m / (5.0 * t);
  const std::complex<double> i_unit(0.0, 1.0);
  std::complex<double> acc = 0.0;
  for (int k = 0; k < 2 * m; ++k) {
    double theta = -pi + (k + 0.5) * pi / m;
    double cot = std::cos(theta) / std::sin(theta);
    std::complex<double> s = r * theta * (cot + i_unit);
    std::complex<double> ds = r * (cot - theta / (std::sin(theta) * std::sin(theta)) + i_unit);
    double re_st = s.real() * t;
    if (re_st < -700.0) continue;  // e^{st} underflows; the tail contributes nothing
    acc += std::exp(s * t) * F(s) * ds;
  }
  return acc * (pi / m) / (two_pi * i_unit);
}

struct LaplaceInversion {
  std::complex<double> value;
  double err;  // node-refinement discrepancy, used as the accuracy estimate
};

/// Inversion with an error estimate from comparing two node counts.
inline LaplaceInversion talbot_inverse_checked(const laplace_fn& F, double t, int m = 32) {
  auto full = talbot_inverse(F, t, m);
  auto coarse = talbot_inverse(F, t, (2 * m) / 3);
  return {full, std::abs(full - coarse)};
}

}  // namespace spherediff
