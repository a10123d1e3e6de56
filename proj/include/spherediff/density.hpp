#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherediff/eigenfunction.hpp"
#include "spherediff/legendre.hpp"
#include "spherediff/solver.hpp"
#include "spherediff/sphere.hpp"
#include "spherediff/subordinator.hpp"

namespace spherediff {

/// The harmonic series for the time-changed density is only proven to
/// converge off theta_y in {theta_x, pi - theta_x}; this guard half-width
/// fences that set.
inline constexpr double density_guard_band = 0.02;

inline bool in_forbidden_band(const SphericalPoint& x, const SphericalPoint& y,
                              double guard = density_guard_band) {
  return std::abs(y.theta() - x.theta()) < guard ||
         std::abs(y.theta() + x.theta() - pi) < guard;
}

struct ForbiddenBandError : std::domain_error {
  ForbiddenBandError()
      : std::domain_error("transition density: theta_y inside the forbidden band around "
                          "{theta_x, pi - theta_x}") {}
};

struct DensityValue {
  double value = 0.0;    // clipped at 0
  double clipped = 0.0;  // magnitude removed by clipping, 0 when none
  double tail_bound = 0.0;
  bool tail_ok = true;
};

/// Classical drifted density via the Legendre form
///   p_mu(t, y|x) = p(t, y_t^{-mu} | x) = sum_l (2l+1)/(4 pi) e^{-l(l+1)t} P_l(x . y_t^{-mu}).
inline DensityValue classical_density(double mu, double t, const SphericalPoint& x,
                                      const SphericalPoint& y, int l_max = 60) {
  if (!(t > 0.0)) throw std::domain_error("classical_density: t must be > 0");
  double c = dot(x, rotate_longitude(y, -mu * t));
  double sum = 0.0;
  for (int l = 0; l <= l_max; ++l)
    sum += (2.0 * l + 1.0) / (4.0 * pi) * std::exp(-double(l) * (l + 1) * t) * legendre_p(l, c);
  double tail = (2.0 * l_max + 3.0) / (4.0 * pi) *
                std::exp(-double(l_max + 1) * (l_max + 2) * t) * double(l_max + 2);
  DensityValue out;
  out.tail_bound = tail;
  out.tail_ok = tail <= 1e-8;
  out.clipped = sum < 0.0 ? -sum : 0.0;
  out.value = std::max(sum, 0.0);
  return out;
}

/// Transition density of the time-changed process. The harmonic engine sums
/// the full (l, m) series against a shared eigenfunction table; the
/// mc-Legendre engine averages the conditional classical kernel over
/// inverse-subordinator draws and remains usable inside the guard band.
class TransitionDensity {
 public:
  TransitionDensity(const ModelParams& params, double t,
                    std::optional<EfunEngine> engine = {})
      : params_(params), t_(t) {
    if (!(t > 0.0)) throw std::domain_error("TransitionDensity: t must be > 0");
    if (params.classical())
      throw std::invalid_argument("TransitionDensity: nonlocal params required");
    table_ = std::make_shared<EigenfunctionTable>(
        *params.spec, params.mu, params.l_max, t,
        engine.value_or(preferred_engine(*params.spec)));
  }

  const EigenfunctionTable& table() const { return *table_; }
  double t() const { return t_; }
  const ModelParams& params() const { return params_; }

  /// Harmonic-series engine (eq. of Thm-density form). Throws inside the
  /// guard band.
  DensityValue series(const SphericalPoint& x, const SphericalPoint& y) const {
    if (in_forbidden_band(x, y)) throw ForbiddenBandError();
    return series_unguarded(x, y);
  }

  /// Series value without the band fence; only normalization helpers that
  /// interpolate across the band may call this near it.
  DensityValue series_unguarded(const SphericalPoint& x, const SphericalPoint& y) const {
    const int L = params_.l_max;
    NormalizedLegendreTable px(L, x.cos_theta());
    NormalizedLegendreTable py(L, y.cos_theta());
    double dphi = x.phi() - y.phi();
    double sum = 0.0;
    for (int l = 0; l <= L; ++l) {
      // m and -m pair to twice the real part
      double row = table_->value(l, 0).real() * px(l, 0) * py(l, 0);
      for (int m = 1; m <= l; ++m) {
        std::complex<double> z = table_->value(l, m) * (px(l, m) * py(l, m)) *
                                 std::polar(1.0, m * dphi);
        row += 2.0 * z.real();
      }
      sum += row;
    }
    DensityValue out;
    out.tail_bound = tail_estimate(x, y);
    out.tail_ok = out.tail_bound <= 1e-6;
    out.clipped = sum < 0.0 ? -sum : 0.0;
    out.value = std::max(sum, 0.0);
    return out;
  }

  /// Monte Carlo Legendre engine: E[(2l+1)/(4 pi) e^{-l(l+1) L} P_l(x . y_L^{-mu})].
  DensityValue mc_legendre(const SphericalPoint& x, const SphericalPoint& y, long n_samples,
                           std::uint64_t seed) const {
    const int L = params_.l_max;
    double ds = default_inverse_step(t_);
    RngStream rng(seed);
    double sum = 0.0;
    for (long i = 0; i < n_samples; ++i) {
      double lv = std::max(sample_inverse(*params_.spec, t_, ds, rng).l_value - 0.5 * ds, 0.0);
      double c = dot(x, rotate_longitude(y, -params_.mu * lv));
      for (int l = 0; l <= L; ++l)
        sum += (2.0 * l + 1.0) / (4.0 * pi) * std::exp(-double(l) * (l + 1) * lv) *
               legendre_p(l, c);
    }
    DensityValue out;
    double v = sum / double(n_samples);
    out.clipped = v < 0.0 ? -v : 0.0;
    out.value = std::max(v, 0.0);
    return out;
  }

  /// Quadrature of the density in y over the band-exact grid. Rows of nodes
  /// that fall inside the guard band are filled by linear interpolation in
  /// cos(theta) from the neighboring rows (the band is measure ~guard).
  double normalization(const SphericalPoint& x, int n_theta = 0, int n_phi = 0) const {
    const int L = params_.l_max;
    if (n_theta <= 0) n_theta = L + 2;
    if (n_phi <= 0) n_phi = 2 * L + 2;
    QuadratureRule rule = gauss_legendre(n_theta);
    std::vector<std::vector<double>> rows(n_theta, std::vector<double>(n_phi));
    std::vector<bool> banded(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      double th = std::acos(rule.nodes[i]);
      banded[i] = std::abs(th - x.theta()) < density_guard_band ||
                  std::abs(th + x.theta() - pi) < density_guard_band;
      if (banded[i]) continue;
      for (int j = 0; j < n_phi; ++j)
        rows[i][j] = series_unguarded(x, SphericalPoint(th, two_pi * j / n_phi)).value;
    }
    for (int i = 0; i < n_theta; ++i) {
      if (!banded[i]) continue;
      int lo = i, hi = i;
      while (lo >= 0 && banded[lo]) --lo;
      while (hi < n_theta && banded[hi]) ++hi;
      for (int j = 0; j < n_phi; ++j) {
        if (lo >= 0 && hi < n_theta) {
          double w = (rule.nodes[i] - rule.nodes[lo]) / (rule.nodes[hi] - rule.nodes[lo]);
          rows[i][j] = (1.0 - w) * rows[lo][j] + w * rows[hi][j];
        } else if (lo >= 0) {
          rows[i][j] = rows[lo][j];
        } else if (hi < n_theta) {
          rows[i][j] = rows[hi][j];
        }
      }
    }
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
      double r = 0.0;
      for (int j = 0; j < n_phi; ++j) r += rows[i][j];
      total += rule.weights[i] * r;
    }
    return total * (two_pi / n_phi);
  }

 private:
  // Szego-type tail: |sum_m| <= C l^{-3/2}; the eigenfunction decay ~ K/l(l+1)
  // is estimated from the tabulated entries.
  double tail_estimate(const SphericalPoint& x, const SphericalPoint& y) const {
    const int L = params_.l_max;
    double gap1 = std::abs(y.theta() - x.theta());
    double gap2 = std::abs(y.theta() + x.theta() - pi);
    double sin_gamma = std::sin(std::min(std::max(gap1, 1e-6), std::max(gap2, 1e-6)));
    double k_est = 0.0;
    for (int l = std::max(1, L / 2); l <= L; ++l)
      k_est = std::max(k_est, std::abs(table_->value(l, 0)) * double(l) * (l + 1));
    // sum_{l > L} (2l+1)/(4 pi) sqrt(2/(pi l sin)) K / (l(l+1)) ~ K c / sqrt(L)
    return k_est / (2.0 * pi) * std::sqrt(2.0 / (pi * sin_gamma)) * 2.0 / std::sqrt(double(L));
  }

  ModelParams params_;
  double t_;
  std::shared_ptr<EigenfunctionTable> table_;
};

/// One-off evaluation; prefer constructing TransitionDensity when scanning
/// grids, the eigenfunction table is the expensive part.
inline DensityValue transition_density(const ModelParams& params, double t,
                                       const SphericalPoint& x, const SphericalPoint& y) {
  return TransitionDensity(params, t).series(x, y);
}

}  // namespace spherediff
