#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherediff/harmonics.hpp"

namespace spherediff {

/// Triangular array of Fourier-Laplace coefficients f_{l,m},
/// 0 <= l <= l_max, -l <= m <= l, stored row-major with m ascending.
class HarmonicCoefficients {
 public:
  explicit HarmonicCoefficients(int l_max)
      : l_max_(l_max), c_(std::size_t(l_max + 1) * (l_max + 1)) {
    if (l_max < 0) throw std::domain_error("HarmonicCoefficients: l_max must be >= 0");
  }

  static HarmonicCoefficients single(int l, int m, complexd value = 1.0, int l_max = -1) {
    if (std::abs(m) > l) throw std::domain_error("HarmonicCoefficients::single: |m| > l");
    HarmonicCoefficients c(l_max < l ? l : l_max);
    c(l, m) = value;
    return c;
  }

  int l_max() const { return l_max_; }
  std::size_t size() const { return c_.size(); }

  complexd& operator()(int l, int m) { return c_[index(l, m)]; }
  const complexd& operator()(int l, int m) const { return c_[index(l, m)]; }

  std::size_t index(int l, int m) const {
    if (l < 0 || l > l_max_ || std::abs(m) > l)
      throw std::out_of_range("HarmonicCoefficients: (l, m) out of range");
    return std::size_t(l) * l + (m + l);
  }

  const std::vector<complexd>& raw() const { return c_; }
  std::vector<complexd>& raw() { return c_; }

  /// True when f_{l,-m} = (-1)^m conj(f_{l,m}) within tol, i.e. the
  /// represented function is real-valued.
  bool is_real_symmetric(double tol = 1e-10) const {
    for (int l = 0; l <= l_max_; ++l)
      for (int m = 0; m <= l; ++m) {
        complexd expect = std::conj((*this)(l, m));
        if (m % 2 != 0) expect = -expect;
        if (std::abs((*this)(l, -m) - expect) > tol) return false;
      }
    return true;
  }

  double l2_norm_squared() const {
    double s = 0.0;
    for (const auto& z : c_) s += std::norm(z);
    return s;
  }

 private:
  int l_max_;
  std::vector<complexd> c_;
};

/// Degree energies A_l = sum_m |f_{l,m}|^2.
class PowerSpectrum {
 public:
  explicit PowerSpectrum(const HarmonicCoefficients& c) : a_(c.l_max() + 1, 0.0) {
    for (int l = 0; l <= c.l_max(); ++l)
      for (int m = -l; m <= l; ++m) a_[l] += std::norm(c(l, m));
  }

  double operator[](int l) const { return a_.at(l); }
  int l_max() const { return int(a_.size()) - 1; }

  double total() const {
    double s = 0.0;
    for (double v : a_) s += v;
    return s;
  }

 private:
  std::vector<double> a_;
};

/// Sobolev seminorm [f]_{H^s} = sqrt(sum_{l>=1} A_l l^{2s}) over the stored
/// degrees. Finite truncation: growth across l_max is the caller's
/// divergence evidence.
inline double sobolev_seminorm(const HarmonicCoefficients& c, double s) {
  if (s < 0.0) throw std::domain_error("sobolev_seminorm: s must be >= 0");
  PowerSpectrum a(c);
  double sum = 0.0;
  for (int l = 1; l <= a.l_max(); ++l) sum += a[l] * std::pow(double(l), 2.0 * s);
  return std::sqrt(sum);
}

/// Full H^s norm sqrt(sum_l (1 + l^{2s}) A_l).
inline double sobolev_norm(const HarmonicCoefficients& c, double s) {
  PowerSpectrum a(c);
  double sum = 0.0;
  for (int l = 0; l <= a.l_max(); ++l) sum += (1.0 + std::pow(double(l), 2.0 * s)) * a[l];
  return std::sqrt(sum);
}

inline nlohmann::json to_json(const HarmonicCoefficients& c) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int l = 0; l <= c.l_max(); ++l)
    for (int m = -l; m <= l; ++m)
      coeffs.push_back({c(l, m).real(), c(l, m).imag()});
  return {{"l_max", c.l_max()}, {"coeffs", coeffs}};
}

inline HarmonicCoefficients coefficients_from_json(const nlohmann::json& j) {
  int l_max = j.at("l_max").get<int>();
  HarmonicCoefficients c(l_max);
  const auto& arr = j.at("coeffs");
  if (arr.size() != c.size())
    throw std::runtime_error("coefficients_from_json: coeffs length mismatch");
  std::size_t k = 0;
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m, ++k)
      c(l, m) = complexd(arr[k][0].get<double>(), arr[k][1].get<double>());
  return c;
}

}  // namespace spherediff
