#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spherediff/coefficients.hpp"
#include "spherediff/rng.hpp"
#include "spherediff/solver.hpp"
#include "spherediff/sphere.hpp"
#include "spherediff/subordinator.hpp"
#include "spherediff/transform.hpp"

namespace spherediff {

struct WalkConfig {
  double step_h = 1e-3;  // operational-time step; <= 1e-2 for acceptance runs
  double mu = 0.0;
  double t_phys = 1.0;
  long n_paths = 10000;
  std::uint64_t rng_seed = 2024;
  int workers = 1;
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline void normalize(Vec3& v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  v[0] /= n;
  v[1] /= n;
  v[2] /= n;
}

/// Orthonormal tangent basis at unit vector n; chart-free, pole-safe.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& n) {
  Vec3 a = std::abs(n[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 e1 = cross(a, n);
  normalize(e1);
  Vec3 e2 = cross(n, e1);
  return {e1, e2};
}

}  // namespace detail

/// Geodesic random walk with generator Delta_g: each step draws a tangent
/// Gaussian with variance 2 * step_h per component (the generator carries no
/// 1/2) and moves along the geodesic. Weak error O(step_h).
inline SphericalPoint simulate_bm(const SphericalPoint& x0, double s, double step_h,
                                  RngStream& rng) {
  if (!(s >= 0.0)) throw std::domain_error("simulate_bm: s must be >= 0");
  if (s == 0.0) return x0;
  detail::Vec3 p = x0.unit_vector();
  long n_steps = long(std::ceil(s / step_h));
  double sigma = std::sqrt(2.0 * step_h);
  double sigma_last = std::sqrt(2.0 * (s - step_h * double(n_steps - 1)));
  for (long k = 0; k < n_steps; ++k) {
    double sd = (k == n_steps - 1) ? sigma_last : sigma;
    double g1 = sd * rng.normal();
    double g2 = sd * rng.normal();
    double r = std::hypot(g1, g2);
    if (r == 0.0) continue;
    auto [e1, e2] = detail::tangent_basis(p);
    double c = std::cos(r), sn = std::sin(r) / r;
    detail::Vec3 q;
    for (int i = 0; i < 3; ++i) q[i] = c * p[i] + sn * (g1 * e1[i] + g2 * e2[i]);
    detail::normalize(q);
    p = q;
  }
  return SphericalPoint::from_unit_vector(p);
}

/// Drift factorizes exactly: W^mu(s) = (theta(s), phi(s) + mu s).
inline SphericalPoint simulate_drifted(const SphericalPoint& x0, double s, double mu,
                                       double step_h, RngStream& rng) {
  return rotate_longitude(simulate_bm(x0, s, step_h, rng), mu * s);
}

/// Euler-Maruyama on the coordinate SDEs (generator Delta_g, so the noise
/// carries sqrt(2) and the theta drift is cot(theta)). Singular at the
/// poles; kept as a cross-check away from the polar caps.
inline SphericalPoint simulate_bm_coordinate(const SphericalPoint& x0, double s, double step_h,
                                             RngStream& rng) {
  if (!(s >= 0.0)) throw std::domain_error("simulate_bm_coordinate: s must be >= 0");
  double theta = x0.theta(), phi = x0.phi();
  long n_steps = long(std::ceil(s / step_h));
  for (long k = 0; k < n_steps; ++k) {
    double h = (k == n_steps - 1) ? s - step_h * double(n_steps - 1) : step_h;
    double root = std::sqrt(2.0 * h);
    theta += root * rng.normal() + std::cos(theta) / std::sin(theta) * h;
    phi += root / std::sin(theta) * rng.normal();
    if (theta < 0.05 || theta > pi - 0.05)
      throw std::runtime_error("simulate_bm_coordinate: path entered a polar cap");
  }
  return {std::clamp(theta, 0.0, pi), wrap_longitude(phi)};
}

struct PathSample {
  SphericalPoint endpoint;
  double l_value = 0.0;  // consumed inverse-subordinator time
  double operational = 0.0;
};

/// One path of the time-changed process: draw L = L_Phi(t_phys) by first
/// passage, run the walk for operational time L, rotate by mu L.
/// Path exhaustion auto-extends s_max (x2, up to 10 times).
inline PathSample simulate_time_changed(const SphericalPoint& x0, double t_phys,
                                        const BernsteinSpec& spec, double mu, double step_h,
                                        double ds, RngStream& rng) {
  if (!(t_phys > 0.0)) throw std::domain_error("simulate_time_changed: t_phys must be > 0");
  double l_value = 0.0;
  if (spec.is_degenerate_clock()) {
    l_value = t_phys;
  } else {
    double s_max = std::max(t_phys, 64.0 * ds);
    auto path = sample_path(spec, s_max, ds, rng);
    for (int attempt = 0; attempt < 10 && !(path.max_value() > t_phys); ++attempt) {
      s_max *= 2.0;
      extend_path(path, spec, s_max, rng);
    }
    l_value = invert_path(path, t_phys).l_value;  // throws PathExhausted if still short
  }
  SphericalPoint w = simulate_bm(x0, l_value, step_h, rng);
  return {rotate_longitude(w, mu * l_value), l_value, l_value};
}

/// Endpoint ensemble of the time-changed walk, distributed over workers
/// with per-worker streams; concatenation order is fixed by worker index.
inline std::vector<PathSample> simulate_ensemble(const SphericalPoint& x0,
                                                 const BernsteinSpec& spec,
                                                 const WalkConfig& cfg, double ds = 0.0) {
  if (ds <= 0.0) ds = default_inverse_step(cfg.t_phys);
  int workers = std::max(cfg.workers, 1);
  std::vector<std::vector<PathSample>> parts(workers);
  auto run = [&](int w) {
    RngStream rng(cfg.rng_seed, std::uint64_t(w));
    long lo = cfg.n_paths * w / workers, hi = cfg.n_paths * (w + 1) / workers;
    parts[w].reserve(hi - lo);
    for (long i = lo; i < hi; ++i)
      parts[w].push_back(simulate_time_changed(x0, cfg.t_phys, spec, cfg.mu, cfg.step_h, ds, rng));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::vector<PathSample> all;
  all.reserve(cfg.n_paths);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

/// Classical (not time-changed) endpoint ensemble at operational time s.
inline std::vector<SphericalPoint> simulate_classical_ensemble(const SphericalPoint& x0,
                                                               double s, const WalkConfig& cfg) {
  int workers = std::max(cfg.workers, 1);
  std::vector<std::vector<SphericalPoint>> parts(workers);
  auto run = [&](int w) {
    RngStream rng(cfg.rng_seed, std::uint64_t(w));
    long lo = cfg.n_paths * w / workers, hi = cfg.n_paths * (w + 1) / workers;
    parts[w].reserve(hi - lo);
    for (long i = lo; i < hi; ++i)
      parts[w].push_back(simulate_drifted(x0, s, cfg.mu, cfg.step_h, rng));
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::vector<SphericalPoint> all;
  all.reserve(cfg.n_paths);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

struct McEstimate {
  std::complex<double> estimate;
  double stderr_re = 0.0;
  double stderr_im = 0.0;

  double stderr_norm() const { return std::hypot(stderr_re, stderr_im); }
};

/// Pairwise tree sum in fixed order, so reductions are reproducible
/// independent of accumulation noise.
inline std::complex<double> tree_sum(std::span<const std::complex<double>> v) {
  if (v.empty()) return 0.0;
  std::vector<std::complex<double>> level(v.begin(), v.end());
  while (level.size() > 1) {
    std::size_t half = (level.size() + 1) / 2;
    for (std::size_t i = 0; i + i + 1 < level.size(); ++i) level[i] = level[2 * i] + level[2 * i + 1];
    if (level.size() % 2 == 1) level[half - 1] = level.back();
    level.resize(half);
  }
  return level[0];
}

/// Mean and standard errors of g over sampled values.
inline McEstimate mc_mean(std::span<const std::complex<double>> values) {
  std::complex<double> sum = tree_sum(values);
  double n = double(values.size());
  std::complex<double> mean = sum / n;
  double vr = 0.0, vi = 0.0;
  for (const auto& v : values) {
    vr += (v.real() - mean.real()) * (v.real() - mean.real());
    vi += (v.imag() - mean.imag()) * (v.imag() - mean.imag());
  }
  return {mean, std::sqrt(vr / (n - 1.0) / n), std::sqrt(vi / (n - 1.0) / n)};
}

/// E_x[f(W^mu_Phi(t))] with componentwise standard errors; f given by its
/// harmonic coefficients.
inline McEstimate empirical_expectation(const HarmonicCoefficients& f, const SphericalPoint& x0,
                                        const BernsteinSpec& spec, const WalkConfig& cfg,
                                        double ds = 0.0) {
  if (cfg.n_paths < 100) throw std::invalid_argument("empirical_expectation: n_paths >= 100");
  auto paths = simulate_ensemble(x0, spec, cfg, ds);
  std::vector<std::complex<double>> values;
  values.reserve(paths.size());
  for (const auto& p : paths) values.push_back(synthesize(f, p.endpoint));
  return mc_mean(values);
}

/// Equal-area partition: bands uniform in cos(theta) x uniform phi sectors.
struct EqualAreaBins {
  int n_bands;
  int n_sectors;

  EqualAreaBins(int bands, int sectors) : n_bands(bands), n_sectors(sectors) {}

  int size() const { return n_bands * n_sectors; }

  int bin_of(const SphericalPoint& p) const {
    double c = std::clamp(p.cos_theta(), -1.0, 1.0);
    int band = std::min(int((1.0 - c) / 2.0 * n_bands), n_bands - 1);
    int sector = std::min(int(p.phi() / two_pi * n_sectors), n_sectors - 1);
    return band * n_sectors + sector;
  }

  double theta_lo(int bin) const { return std::acos(1.0 - 2.0 * double(bin / n_sectors) / n_bands); }
  double theta_hi(int bin) const {
    return std::acos(1.0 - 2.0 * double(bin / n_sectors + 1) / n_bands);
  }
  double phi_lo(int bin) const { return two_pi * double(bin % n_sectors) / n_sectors; }
  double phi_hi(int bin) const { return two_pi * double(bin % n_sectors + 1) / n_sectors; }
  double area(int) const { return 4.0 * pi / size(); }
};

struct SphereHistogram {
  EqualAreaBins bins;
  std::vector<double> mass;  // fraction of samples per bin

  explicit SphereHistogram(const EqualAreaBins& b) : bins(b), mass(b.size(), 0.0) {}
};

inline SphereHistogram histogram_endpoints(std::span<const PathSample> paths,
                                           const EqualAreaBins& bins) {
  SphereHistogram h(bins);
  double w = 1.0 / double(paths.size());
  for (const auto& p : paths) h.mass[bins.bin_of(p.endpoint)] += w;
  return h;
}

}  // namespace spherediff
