#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spherediff/sphere.hpp"

namespace spherediff {

/// Legendre polynomial P_l(x) by the three-term recurrence.
inline double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: l must be >= 0");
  if (l == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= l; ++k) {
    double pn = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = pn;
  }
  return p;
}

/// P_l(x) and its derivative, used by the Gauss-Legendre node solver.
inline std::pair<double, double> legendre_p_and_deriv(int l, double x) {
  if (l == 0) return {1.0, 0.0};
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= l; ++k) {
    double pn = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = pn;
  }
  double dp = l * (x * p - pm1) / (x * x - 1.0);
  return {p, dp};
}

/// Fully normalized associated Legendre function
///   Ptilde_l^m(x) = sqrt((2l+1)(l-m)! / (4 pi (l+m)!)) * P_l^m(x),
/// Condon-Shortley phase included, so that
///   Y_{l,m}(theta, phi) = Ptilde_l^m(cos theta) e^{i m phi}   (m >= 0).
///
/// Forward recurrence in l at fixed m. Stable into the thousands of degrees;
/// the factorial (Rodrigues) form overflows near l ~ 30.
inline double normalized_legendre(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) throw std::domain_error("normalized_legendre: need 0 <= m <= l");
  if (std::abs(x) > 1.0) throw std::domain_error("normalized_legendre: |x| > 1");

  double pmm = 1.0 / std::sqrt(4.0 * pi);  // Ptilde_0^0
  double s2 = (1.0 - x) * (1.0 + x);
  for (int i = 1; i <= m; ++i)
    pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i) * s2);
  if (l == m) return pmm;

  double pm1 = pmm;
  double p = x * std::sqrt(2.0 * m + 3.0) * pmm;
  for (int k = m + 2; k <= l; ++k) {
    double a = std::sqrt((4.0 * k * k - 1.0) / (double(k) * k - double(m) * m));
    double b = std::sqrt(((k - 1.0) * (k - 1.0) - double(m) * m) /
                         (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
    double pn = a * (x * p - b * pm1);
    pm1 = p;
    p = pn;
  }
  return p;
}

/// Associated Legendre function P_l^m in the Rodrigues convention
/// (Condon-Shortley phase included), recovered by denormalizing the stable
/// recurrence value.
inline double assoc_legendre(int l, int m, double s) {
  if (l < 0 || m < 0 || m > l) throw std::domain_error("assoc_legendre: need 0 <= m <= l");
  if (std::abs(s) > 1.0) throw std::domain_error("assoc_legendre: |s| > 1");
  double scale = std::sqrt(4.0 * pi / (2.0 * l + 1.0));
  for (int k = l - m + 1; k <= l + m; ++k) scale *= std::sqrt(double(k));
  return scale * normalized_legendre(l, m, s);
}

/// All Ptilde_l^m(x) for 0 <= m <= l <= l_max, packed as [l(l+1)/2 + m].
/// One sweep of the recurrence above; shared by transforms and densities.
class NormalizedLegendreTable {
 public:
  NormalizedLegendreTable(int l_max, double x)
      : l_max_(l_max), v_(std::size_t(l_max + 1) * (l_max + 2) / 2) {
    double s2 = (1.0 - x) * (1.0 + x);
    double pmm = 1.0 / std::sqrt(4.0 * pi);
    for (int m = 0; m <= l_max; ++m) {
      if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m) * s2);
      at(m, m) = pmm;
      if (m + 1 <= l_max) at(m + 1, m) = x * std::sqrt(2.0 * m + 3.0) * pmm;
      for (int l = m + 2; l <= l_max; ++l) {
        double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                             (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
      }
    }
  }

  double operator()(int l, int m) const { return v_[std::size_t(l) * (l + 1) / 2 + m]; }
  int l_max() const { return l_max_; }

 private:
  double& at(int l, int m) { return v_[std::size_t(l) * (l + 1) / 2 + m]; }
  int l_max_;
  std::vector<double> v_;
};

struct QuadratureRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_p_and_deriv(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre_p_and_deriv(n, x);
    (void)p;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  return rule;
}

}  // namespace spherediff
