#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "spherediff/coefficients.hpp"
#include "spherediff/legendre.hpp"
#include "spherediff/sphere.hpp"

namespace spherediff {

/// Tensor quadrature grid: Gauss-Legendre in cos(theta) x uniform in phi.
/// Exact for band-limited integrands of degree <= 2 l_max when built with
/// for_band_limit(l_max).
class SphericalGrid {
 public:
  SphericalGrid(int n_theta, int n_phi)
      : rule_(gauss_legendre(n_theta)), n_phi_(n_phi), values_(std::size_t(n_theta) * n_phi) {
    if (n_phi < 1) throw std::domain_error("SphericalGrid: n_phi must be >= 1");
  }

  static SphericalGrid for_band_limit(int l_max) {
    return SphericalGrid(l_max + 1, 2 * l_max + 1);
  }

  int n_theta() const { return int(rule_.nodes.size()); }
  int n_phi() const { return n_phi_; }

  double cos_theta(int i) const { return rule_.nodes[i]; }
  double theta(int i) const { return std::acos(rule_.nodes[i]); }
  double phi(int j) const { return two_pi * j / n_phi_; }
  double theta_weight(int i) const { return rule_.weights[i]; }

  SphericalPoint point(int i, int j) const { return {theta(i), phi(j)}; }

  complexd& value(int i, int j) { return values_[std::size_t(i) * n_phi_ + j]; }
  const complexd& value(int i, int j) const { return values_[std::size_t(i) * n_phi_ + j]; }

  void sample(const std::function<complexd(const SphericalPoint&)>& f) {
    for (int i = 0; i < n_theta(); ++i)
      for (int j = 0; j < n_phi_; ++j) value(i, j) = f(point(i, j));
  }

  /// Quadrature of the stored samples against d(sigma).
  complexd integrate() const {
    complexd s = 0.0;
    for (int i = 0; i < n_theta(); ++i) {
      complexd row = 0.0;
      for (int j = 0; j < n_phi_; ++j) row += value(i, j);
      s += theta_weight(i) * row;
    }
    return s * (two_pi / n_phi_);
  }

 private:
  QuadratureRule rule_;
  int n_phi_;
  std::vector<complexd> values_;
};

/// Forward transform: f_{l,m} = integral of f * conj(Y_{l,m}) d(sigma),
/// evaluated on the tensor quadrature grid. Exact (to rounding) for
/// band-limited f of degree <= l_max.
inline HarmonicCoefficients analyze(const SphericalGrid& grid, int l_max) {
  if (grid.n_theta() < l_max + 1 || grid.n_phi() < 2 * l_max + 1)
    throw std::invalid_argument(
        "analyze: grid too coarse; need >= l_max+1 theta nodes and >= 2*l_max+1 phi nodes");

  HarmonicCoefficients c(l_max);
  const int nt = grid.n_theta(), np = grid.n_phi();
  const double dphi = two_pi / np;

  // g_m(theta_i) = dphi * sum_j f(theta_i, phi_j) e^{-i m phi_j}
  std::vector<complexd> gm(std::size_t(nt) * (2 * l_max + 1));
  for (int i = 0; i < nt; ++i) {
    for (int m = -l_max; m <= l_max; ++m) {
      complexd s = 0.0;
      for (int j = 0; j < np; ++j)
        s += grid.value(i, j) * std::polar(1.0, -m * grid.phi(j));
      gm[std::size_t(i) * (2 * l_max + 1) + (m + l_max)] = s * dphi;
    }
  }

  for (int i = 0; i < nt; ++i) {
    NormalizedLegendreTable pt(l_max, grid.cos_theta(i));
    double w = grid.theta_weight(i);
    for (int l = 0; l <= l_max; ++l) {
      for (int m = -l; m <= l; ++m) {
        int ma = std::abs(m);
        double p = pt(l, ma);
        if (m < 0 && ma % 2 != 0) p = -p;  // Ptilde_l^{-m} = (-1)^m Ptilde_l^m
        c(l, m) += w * p * gm[std::size_t(i) * (2 * l_max + 1) + (m + l_max)];
      }
    }
  }
  return c;
}

inline HarmonicCoefficients analyze(const std::function<complexd(const SphericalPoint&)>& f,
                                    int l_max, int oversample = 0) {
  SphericalGrid grid(l_max + 1 + oversample, 2 * l_max + 1 + 2 * oversample);
  grid.sample(f);
  return analyze(grid, l_max);
}

/// Pointwise sum of the truncated Fourier-Laplace series at x.
inline complexd synthesize(const HarmonicCoefficients& c, const SphericalPoint& x) {
  NormalizedLegendreTable pt(c.l_max(), x.cos_theta());
  complexd s = 0.0;
  for (int l = 0; l <= c.l_max(); ++l) {
    s += c(l, 0) * pt(l, 0);
    for (int m = 1; m <= l; ++m) {
      complexd e = std::polar(1.0, m * x.phi());
      double p = pt(l, m);
      double sign = (m % 2 != 0) ? -1.0 : 1.0;
      s += c(l, m) * p * e + c(l, -m) * sign * p * std::conj(e);
    }
  }
  return s;
}

/// Samples the truncated series on a quadrature grid.
inline SphericalGrid synthesize_grid(const HarmonicCoefficients& c, int n_theta, int n_phi) {
  SphericalGrid grid(n_theta, n_phi);
  for (int i = 0; i < n_theta; ++i) {
    NormalizedLegendreTable pt(c.l_max(), grid.cos_theta(i));
    for (int j = 0; j < n_phi; ++j) {
      complexd s = 0.0;
      for (int l = 0; l <= c.l_max(); ++l) {
        s += c(l, 0) * pt(l, 0);
        for (int m = 1; m <= l; ++m) {
          complexd e = std::polar(1.0, m * grid.phi(j));
          double p = pt(l, m);
          double sign = (m % 2 != 0) ? -1.0 : 1.0;
          s += c(l, m) * p * e + c(l, -m) * sign * p * std::conj(e);
        }
      }
      grid.value(i, j) = s;
    }
  }
  return grid;
}

}  // namespace spherediff
