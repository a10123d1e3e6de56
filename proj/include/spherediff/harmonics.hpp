#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spherediff/legendre.hpp"
#include "spherediff/sphere.hpp"

namespace spherediff {

using complexd = std::complex<double>;

/// Laplace spherical harmonic Y_{l,m}(theta, phi).
/// Negative m via the symmetry Y_{l,-m} = (-1)^m conj(Y_{l,m}).
inline complexd ylm(int l, int m, const SphericalPoint& x) {
  if (std::abs(m) > l) throw std::domain_error("ylm: |m| > l");
  int ma = std::abs(m);
  double pt = normalized_legendre(l, ma, x.cos_theta());
  complexd y = pt * std::polar(1.0, ma * x.phi());
  if (m < 0) {
    y = std::conj(y);
    if (ma % 2 != 0) y = -y;
  }
  return y;
}

struct AdditionCheck {
  complexd lhs;  // sum_m Y_{l,m}(x) conj(Y_{l,m}(y))
  double rhs;    // (2l+1)/(4 pi) P_l(x . y)
};

/// Both sides of the degree-l addition formula; the caller compares them.
inline AdditionCheck addition_check(int l, const SphericalPoint& x, const SphericalPoint& y) {
  if (l < 0) throw std::domain_error("addition_check: l must be >= 0");
  complexd lhs = 0.0;
  NormalizedLegendreTable px(l, x.cos_theta());
  NormalizedLegendreTable py(l, y.cos_theta());
  for (int m = -l; m <= l; ++m) {
    int ma = std::abs(m);
    // phases of Y(x) conj(Y(y)) combine to e^{i m (phi_x - phi_y)}; the
    // (-1)^m factors from negative m cancel between the pair
    complexd term = px(l, ma) * py(l, ma) * std::polar(1.0, m * (x.phi() - y.phi()));
    lhs += term;
  }
  double rhs = (2.0 * l + 1.0) / (4.0 * pi) * legendre_p(l, dot(x, y));
  return {lhs, rhs};
}

}  // namespace spherediff
