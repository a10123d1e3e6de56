#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherediff/coefficients.hpp"
#include "spherediff/eigenfunction.hpp"
#include "spherediff/nonlocal.hpp"
#include "spherediff/rng.hpp"
#include "spherediff/solver.hpp"

namespace spherediff {

/// Random real-valued function with A_l ~ (1+l)^{-2s-2}, scaled to unit
/// H^s norm; lives in H^s but in no H^{s'+1/2} beyond it.
inline HarmonicCoefficients random_hs_function(double s, int l_max, std::uint64_t seed) {
  RngStream rng(seed);
  HarmonicCoefficients f(l_max);
  for (int l = 1; l <= l_max; ++l) {
    double sigma = std::pow(1.0 + l, -(s + 1.0));
    f(l, 0) = sigma * rng.normal();
    for (int m = 1; m <= l; ++m) {
      std::complex<double> z(rng.normal(), rng.normal());
      f(l, m) = sigma * z;
      f(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(f(l, m));
    }
  }
  double norm = sobolev_norm(f, s);
  for (auto& z : f.raw()) z /= norm;
  return f;
}

struct GapReport {
  std::vector<double> t;
  std::vector<double> empirical;  // max over the test family
  std::vector<double> upper;
  std::vector<double> lower;  // NaN where the paper offers no lower bound
  double c_upper = 0.0;       // sup of e_Phi(t;-2) t^alpha / L(1/t) on [1, 1e4]
  double c_lower = 0.0;       // inf of the same ratio
};

/// Envelope constants estimated on a log grid of t in [1, 1e4]; these are
/// numerical stand-ins for the sup/inf in the convergence-rate bounds.
inline std::pair<double, double> envelope_constants(const BernsteinSpec& spec,
                                                    EfunEngine engine) {
  double alpha = spec.alpha();
  double cbar = 0.0, clow = std::numeric_limits<double>::infinity();
  EigenfunctionQuery q{spec, 1.0, -2.0, engine};
  for (double t : log_grid(1.0, 1e4, 160)) {
    q.t = t;
    double ratio = efun(q).value.real() * std::pow(t, alpha) / slowly_varying_factor(spec, 1.0 / t);
    cbar = std::max(cbar, ratio);
    clow = std::min(clow, ratio);
  }
  return {cbar, clow};
}

/// Distance to stationarity of E_x[f(W^mu_Phi(t))] over a finite test
/// family (Y_{1,0}, Y_{1,1}, random unit H^s functions), sandwiched between
/// the paper-style envelopes. The lower envelope needs mu = 0 or a start
/// away from the equator.
inline GapReport convergence_gap(const SphericalPoint& x, const ModelParams& params,
                                 std::span<const double> t_grid, double s,
                                 std::uint64_t seed = 99) {
  if (params.classical() || !relaxation_supported(*params.spec))
    throw std::invalid_argument("convergence_gap: spec without regular variation data");
  const BernsteinSpec& spec = *params.spec;
  double alpha = spec.alpha();
  EfunEngine engine = preferred_engine(spec);

  std::vector<HarmonicCoefficients> family;
  family.push_back(HarmonicCoefficients::single(1, 0));
  family.push_back(HarmonicCoefficients::single(1, 1));
  int l_max = std::max(params.l_max, 8);
  for (int k = 0; k < 3; ++k) family.push_back(random_hs_function(s, l_max, seed + k));

  auto [cbar, clow] = envelope_constants(spec, engine);
  double zeta_sum = std::sqrt(std::riemann_zeta(2.0 * s - 1.0)) + std::sqrt(std::riemann_zeta(2.0 * s));

  GapReport rep;
  rep.c_upper = cbar;
  rep.c_lower = clow;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool on_equator = std::abs(x.theta() - pi / 2.0) < 1e-9;
  for (double t : t_grid) {
    int fam_lmax = 1;
    for (const auto& f : family) fam_lmax = std::max(fam_lmax, f.l_max());
    EigenfunctionTable table(spec, params.mu, fam_lmax, t, engine);
    double worst = 0.0;
    for (const auto& f : family) {
      std::complex<double> gap = 0.0;
      for (int l = 1; l <= f.l_max(); ++l)
        for (int m = -l; m <= l; ++m)
          if (std::abs(f(l, m)) != 0.0) gap += f(l, m) * table.value(l, m) * ylm(l, m, x);
      worst = std::max(worst, std::abs(gap));
    }
    double lt = slowly_varying_factor(spec, 1.0 / t);
    rep.t.push_back(t);
    rep.empirical.push_back(worst);
    rep.upper.push_back(cbar * zeta_sum / std::sqrt(two_pi) * std::pow(t, -alpha) * lt);
    if (params.mu == 0.0)
      rep.lower.push_back(std::sqrt(3.0 / pi) * clow * lt / 4.0 * std::pow(t, -alpha));
    else if (!on_equator)
      rep.lower.push_back(std::sqrt(3.0 / (4.0 * pi)) * clow * lt * std::pow(t, -alpha) *
                          std::abs(x.cos_theta()));
    else
      rep.lower.push_back(nan);
  }
  return rep;
}

/// Least-squares slope of log(y) against log(t).
inline double log_log_slope(std::span<const double> t, std::span<const double> y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spherediff
