#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spherediff/bernstein.hpp"
#include "spherediff/rng.hpp"

namespace spherediff {

/// One i.i.d. increment of S_Phi over operational time ds.
///   stable: Kanter sampler scaled by ds^{1/alpha}
///   gamma: Gamma(ds, 1)
///   tempered stable: exponential tilting of the stable proposal
///   geometric stable: stable increment run over an independent Gamma(ds) time
inline double subordinator_increment(const BernsteinSpec& spec, double ds, RngStream& rng) {
  if (!(ds > 0.0)) throw std::invalid_argument("subordinator_increment: ds must be > 0");
  switch (spec.kind()) {
    case BernsteinKind::stable: {
      if (spec.is_degenerate_clock()) return ds;
      return std::pow(ds, 1.0 / spec.alpha()) * positive_stable(spec.alpha(), rng);
    }
    case BernsteinKind::gamma:
      return rng.gamma(ds);
    case BernsteinKind::tempered_stable: {
      double scale = std::pow(ds, 1.0 / spec.alpha());
      for (;;) {
        double x = scale * positive_stable(spec.alpha(), rng);
        if (rng.uniform() <= std::exp(-spec.theta() * x)) return x;
      }
    }
    case BernsteinKind::geometric_stable: {
      double g = rng.gamma(ds);
      if (g <= 0.0) return 0.0;
      return std::pow(g, 1.0 / spec.alpha()) * positive_stable(spec.alpha(), rng);
    }
  }
  return 0.0;
}

/// Grid record of one subordinator trajectory: S(k * ds), nondecreasing,
/// S(0) = 0.
struct SubordinatorPath {
  double ds = 0.0;
  std::vector<double> values;  // values[k] = S(k * ds)

  double s_at(std::size_t k) const { return double(k) * ds; }
  double max_value() const { return values.empty() ? 0.0 : values.back(); }
};

inline SubordinatorPath sample_path(const BernsteinSpec& spec, double s_max, double ds,
                                    RngStream& rng) {
  if (!(ds > 0.0)) throw std::invalid_argument("sample_path: ds must be > 0");
  if (!(s_max >= ds)) throw std::invalid_argument("sample_path: s_max must be >= ds");
  std::size_t n = std::size_t(std::ceil(s_max / ds));
  SubordinatorPath path;
  path.ds = ds;
  path.values.resize(n + 1);
  path.values[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    path.values[k] = path.values[k - 1] + subordinator_increment(spec, ds, rng);
  return path;
}

/// Appends fresh increments until the grid reaches s_max; increments are
/// i.i.d., so growing a trajectory in place keeps its law.
inline void extend_path(SubordinatorPath& path, const BernsteinSpec& spec, double s_max,
                        RngStream& rng) {
  std::size_t n = std::size_t(std::ceil(s_max / path.ds));
  while (path.values.size() <= n)
    path.values.push_back(path.values.back() + subordinator_increment(spec, path.ds, rng));
}

/// One sample of the inverse subordinator L_Phi(t).
struct InverseSample {
  double t = 0.0;
  double l_value = 0.0;
  double resolution = 0.0;  // grid step; first-passage bias is at most this
};

struct PathExhausted : std::runtime_error {
  PathExhausted() : std::runtime_error("invert_path: path does not reach beyond t") {}
};

/// First-passage inversion: the first grid time s_k with S(s_k) > t.
inline InverseSample invert_path(const SubordinatorPath& path, double t) {
  if (!(t > 0.0)) throw std::domain_error("invert_path: t must be > 0");
  if (!(path.max_value() > t)) throw PathExhausted();
  // binary search over the nondecreasing values
  std::size_t lo = 0, hi = path.values.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (path.values[mid] > t)
      hi = mid;
    else
      lo = mid + 1;
  }
  return {t, path.s_at(lo), path.ds};
}

/// Streaming equivalent of invert_path(sample_path(...), t): accumulates
/// increments until first passage, without storing the trajectory.
inline InverseSample sample_inverse(const BernsteinSpec& spec, double t, double ds,
                                    RngStream& rng) {
  if (!(t > 0.0)) throw std::domain_error("sample_inverse: t must be > 0");
  if (spec.is_degenerate_clock()) return {t, t, 0.0};
  double s_value = 0.0;
  std::size_t k = 0;
  while (s_value <= t) {
    s_value += subordinator_increment(spec, ds, rng);
    ++k;
  }
  return {t, double(k) * ds, ds};
}

inline double default_inverse_step(double t) { return t * 1e-3; }

struct Histogram1D {
  std::vector<double> edges;  // n_bins + 1 ascending edges
  std::vector<double> mass;   // fraction of samples per bin, sums to <= 1

  double center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  double width(std::size_t b) const { return edges[b + 1] - edges[b]; }
  double density(std::size_t b) const { return mass[b] / width(b); }
  std::size_t size() const { return mass.size(); }
};

/// Normalized histogram of L_Phi(t) samples.
inline Histogram1D inverse_density_estimate(const BernsteinSpec& spec, double t, int n_samples,
                                            int n_bins, RngStream& rng, double ds = 0.0) {
  if (n_samples < 10000)
    throw std::invalid_argument("inverse_density_estimate: need n_samples >= 10^4");
  if (n_bins < 1) throw std::invalid_argument("inverse_density_estimate: n_bins must be >= 1");
  if (ds <= 0.0) ds = default_inverse_step(t);

  std::vector<double> samples(n_samples);
  double max_v = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    samples[i] = sample_inverse(spec, t, ds, rng).l_value;
    max_v = std::max(max_v, samples[i]);
  }

  Histogram1D h;
  h.edges.resize(n_bins + 1);
  h.mass.assign(n_bins, 0.0);
  double hi = max_v * (1.0 + 1e-12);
  for (int b = 0; b <= n_bins; ++b) h.edges[b] = hi * b / n_bins;
  for (double v : samples) {
    int b = std::min(int(v / hi * n_bins), n_bins - 1);
    h.mass[b] += 1.0 / n_samples;
  }
  return h;
}

}  // namespace spherediff
