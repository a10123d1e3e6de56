#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherediff/coefficients.hpp"
#include "spherediff/eigenfunction.hpp"
#include "spherediff/nonlocal.hpp"
#include "spherediff/transform.hpp"

namespace spherediff {

/// Model configuration: drift intensity, clock (absent = classical
/// Brownian time), and truncation degree.
struct ModelParams {
  double mu = 0.0;
  std::optional<BernsteinSpec> spec;  // nullopt: classical Kolmogorov equation
  int l_max = 1;

  bool classical() const { return !spec.has_value(); }
};

/// Eigenvalue of G_mu = Delta_g + mu d/dphi on Y_{l,m}.
inline std::complex<double> eigenvalue(int l, int m, double mu) {
  if (std::abs(m) > l) throw std::domain_error("eigenvalue: |m| > l");
  return {-double(l) * (l + 1), mu * m};
}

struct SolutionSnapshot {
  double t = 0.0;
  HarmonicCoefficients coeffs;
  ModelParams params;
  double truncation_tail = 0.0;  // discarded-mode mass bound, when known
};

inline nlohmann::json to_json(const SolutionSnapshot& snap) {
  nlohmann::json j = to_json(snap.coeffs);
  j["t"] = snap.t;
  j["mu"] = snap.params.mu;
  j["phi"] = snap.params.classical() ? "classical" : snap.params.spec->to_string();
  j["tail"] = snap.truncation_tail;
  return j;
}

/// u_{l,m}(t) = f_{l,m} exp((i mu m - l(l+1)) t).
inline SolutionSnapshot solve_classical(const HarmonicCoefficients& f, double mu, double t) {
  if (!(t >= 0.0)) throw std::domain_error("solve_classical: t must be >= 0");
  SolutionSnapshot snap{t, f, ModelParams{mu, std::nullopt, f.l_max()}, 0.0};
  for (int l = 0; l <= f.l_max(); ++l)
    for (int m = -l; m <= l; ++m)
      snap.coeffs(l, m) = f(l, m) * std::exp(eigenvalue(l, m, mu) * t);
  return snap;
}

/// u_{l,m}(t) = f_{l,m} e_Phi(t; i mu m - l(l+1)). Classical params fall
/// back to solve_classical.
inline SolutionSnapshot solve_nonlocal(const HarmonicCoefficients& f, const ModelParams& params,
                                       double t, std::optional<EfunEngine> engine = {}) {
  if (!(t >= 0.0)) throw std::domain_error("solve_nonlocal: t must be >= 0");
  if (params.classical()) return solve_classical(f, params.mu, t);
  SolutionSnapshot snap{t, f, params, 0.0};
  if (t == 0.0) return snap;
  EigenfunctionTable table(*params.spec, params.mu, f.l_max(), t,
                           engine.value_or(preferred_engine(*params.spec)));
  for (int l = 0; l <= f.l_max(); ++l)
    for (int m = -l; m <= l; ++m)
      snap.coeffs(l, m) = f(l, m) * table.value(l, m);
  return snap;
}

/// Forward (Fokker-Planck side) evolution of a probability density:
/// coefficients pick up e_Phi(t; -i mu m - l(l+1)); the mass f_{0,0} is
/// untouched since lambda_{0,0} = 0.
inline SolutionSnapshot forward_evolve(const HarmonicCoefficients& f_density,
                                       const ModelParams& params, double t,
                                       std::optional<EfunEngine> engine = {}) {
  if (!(t >= 0.0)) throw std::domain_error("forward_evolve: t must be >= 0");
  if (!f_density.is_real_symmetric(1e-8))
    throw std::invalid_argument("forward_evolve: input is not a real-valued density");
  double mass = f_density(0, 0).real() * std::sqrt(4.0 * pi);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument("forward_evolve: density does not integrate to 1");
  for (int i = 0; i < 64; ++i) {  // nonnegativity spot check
    SphericalPoint x(std::acos(-1.0 + 2.0 * (i + 0.5) / 64.0), two_pi * ((i * 29) % 64) / 64.0);
    if (synthesize(f_density, x).real() < -1e-6)
      throw std::invalid_argument("forward_evolve: density is negative on the sphere");
  }
  ModelParams adj = params;
  adj.mu = -params.mu;
  SolutionSnapshot snap = solve_nonlocal(f_density, adj, t, engine);
  snap.params = params;
  return snap;
}

/// Pointwise residual of the time-nonlocal Kolmogorov equation,
/// max_j max_x |D^Phi u(t_j, x) - (G_mu u)(t_j, x)|, with D^Phi applied to
/// the time series of the synthesized solution at each probe point.
inline double pde_residual(const HarmonicCoefficients& f, const ModelParams& params, double dt,
                           double t_end, std::span<const SphericalPoint> probes,
                           double t_min = 0.1) {
  if (params.classical())
    throw std::invalid_argument("pde_residual: nonlocal params required");
  int n = int(std::round(t_end / dt));

  // time series of e_Phi per active mode
  struct Mode {
    int l, m;
    std::complex<double> f_lm;
    std::complex<double> lam;
    std::vector<std::complex<double>> e;  // e[k] = e_Phi(k dt; lam)
  };
  std::vector<Mode> modes;
  EfunEngine engine = preferred_engine(*params.spec);
  for (int l = 0; l <= f.l_max(); ++l)
    for (int m = -l; m <= l; ++m) {
      if (std::abs(f(l, m)) == 0.0) continue;
      Mode mo{l, m, f(l, m), eigenvalue(l, m, params.mu), {}};
      mo.e.resize(n + 1);
      mo.e[0] = 1.0;
      EigenfunctionQuery q{*params.spec, 1.0, mo.lam, engine};
      for (int k = 1; k <= n; ++k) {
        q.t = k * dt;
        mo.e[k] = (l == 0) ? 1.0 : efun(q).value;
      }
      modes.push_back(std::move(mo));
    }

  NonlocalDerivative d(*params.spec, dt, n);
  double worst = 0.0;
  std::vector<std::complex<double>> u(n + 1), gu(n + 1);
  for (const auto& x : probes) {
    std::fill(u.begin(), u.end(), std::complex<double>(0.0));
    std::fill(gu.begin(), gu.end(), std::complex<double>(0.0));
    for (const auto& mo : modes) {
      std::complex<double> y = mo.f_lm * ylm(mo.l, mo.m, x);
      for (int k = 0; k <= n; ++k) {
        u[k] += y * mo.e[k];
        gu[k] += mo.lam * y * mo.e[k];
      }
    }
    for (int j = 2; j <= n; ++j) {
      if (j * dt < t_min) continue;
      std::complex<double> r = d(std::span<const std::complex<double>>(u), j) - gu[j];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

/// Both sides of the very weak formulation for a band-limited test
/// function h:
///   d/dt  integral h (nu_bar * (u - f)) dsigma   vs
///   integral u G_{-mu} h dsigma.
/// Space integrals use the band-exact quadrature; the time derivative uses
/// the same product integration as D^Phi.
inline double weak_form_residual(const HarmonicCoefficients& f, const HarmonicCoefficients& h,
                                 const ModelParams& params, double dt, double t_end,
                                 double t_min = 0.1) {
  if (params.classical())
    throw std::invalid_argument("weak_form_residual: nonlocal params required");
  int n = int(std::round(t_end / dt));
  int l_max = std::max(f.l_max(), h.l_max());

  // H_{l,m} = integral h Y_{l,m} dsigma and the same against G_{-mu} h,
  // by quadrature exact at this band limit.
  HarmonicCoefficients gh(h.l_max());
  for (int l = 0; l <= h.l_max(); ++l)
    for (int m = -l; m <= l; ++m)
      gh(l, m) = h(l, m) * eigenvalue(l, -m, params.mu);  // -i mu m - l(l+1)
  SphericalGrid grid = synthesize_grid(h, l_max + 1, 2 * l_max + 1);
  SphericalGrid ggrid = synthesize_grid(gh, l_max + 1, 2 * l_max + 1);
  HarmonicCoefficients pair_h(l_max), pair_gh(l_max);
  {
    SphericalGrid tmp(l_max + 1, 2 * l_max + 1);
    for (int i = 0; i < tmp.n_theta(); ++i)
      for (int j = 0; j < tmp.n_phi(); ++j) tmp.value(i, j) = std::conj(grid.value(i, j));
    pair_h = analyze(tmp, l_max);  // conj so that conj(pair_h) = integral h Y_{l,m}
    for (int i = 0; i < tmp.n_theta(); ++i)
      for (int j = 0; j < tmp.n_phi(); ++j) tmp.value(i, j) = std::conj(ggrid.value(i, j));
    pair_gh = analyze(tmp, l_max);
  }

  // e_Phi series per mode of f
  EfunEngine engine = preferred_engine(*params.spec);
  std::vector<std::complex<double>> G(n + 1, 0.0);  // integral h (u - f)
  std::vector<std::complex<double>> rhs(n + 1, 0.0);
  for (int l = 0; l <= f.l_max(); ++l)
    for (int m = -l; m <= l; ++m) {
      if (std::abs(f(l, m)) == 0.0) continue;
      std::complex<double> hp = std::conj(pair_h(l, m));
      std::complex<double> gp = std::conj(pair_gh(l, m));
      if (std::abs(hp) == 0.0 && std::abs(gp) == 0.0) continue;
      EigenfunctionQuery q{*params.spec, 1.0, eigenvalue(l, m, params.mu), engine};
      for (int k = 0; k <= n; ++k) {
        std::complex<double> e = 1.0;
        if (k > 0 && l > 0) {
          q.t = k * dt;
          e = efun(q).value;
        }
        G[k] += f(l, m) * (e - 1.0) * hp;
        rhs[k] += f(l, m) * e * gp;
      }
    }

  NonlocalDerivative d(*params.spec, dt, n);
  double worst = 0.0;
  for (int j = 2; j <= n; ++j) {
    if (j * dt < t_min) continue;
    std::complex<double> lhs = d(std::span<const std::complex<double>>(G), j);
    worst = std::max(worst, std::abs(lhs - rhs[j]));
  }
  return worst;
}

/// Partial sums of sum_l l^{2 exponent} A_l(u(t)) for the regularity probe.
struct RegularityReport {
  double s = 0.0, alpha = 0.0, t = 0.0;
  std::vector<double> epsilons;
  std::vector<long> l_maxes;
  // partial[e][i]: partial sum at exponent s+2+epsilons[e] up to l_maxes[i]
  std::vector<std::vector<double>> partial;
  std::vector<bool> divergent;        // per epsilon
  std::vector<double> input_partial;  // sum (1 + l^{2s}) f_l^2 across l_maxes
};

/// Initial datum f_l = 1 / (l^{s+1/2} log l) on Y_{l,0}: u(t) stays in
/// H^{s+2} but escapes every H^{s+2+eps}. Flags growth by more than a
/// factor of 2 across each decade of l_max.
inline RegularityReport regularity_probe(double s, double alpha, double t,
                                         std::span<const double> epsilons,
                                         std::span<const long> l_max_list) {
  if (!(s > 1.0)) throw std::domain_error("regularity_probe: s must be > 1");
  if (!(t > 0.0)) throw std::domain_error("regularity_probe: t must be > 0");
  RegularityReport rep;
  rep.s = s;
  rep.alpha = alpha;
  rep.t = t;
  rep.epsilons.assign(epsilons.begin(), epsilons.end());
  rep.l_maxes.assign(l_max_list.begin(), l_max_list.end());
  long biggest = rep.l_maxes.back();

  double ta = std::pow(t, alpha);
  rep.partial.assign(epsilons.size(), {});
  std::vector<double> acc(epsilons.size(), 0.0);
  double input_acc = 0.0;
  std::size_t next = 0;
  rep.input_partial.clear();
  for (long l = 2; l <= biggest; ++l) {
    double fl = 1.0 / (std::pow(double(l), s + 0.5) * std::log(double(l)));
    double e = mittag_leffler(alpha, -double(l) * (l + 1) * ta).value.real();
    double al_u = fl * fl * e * e;
    for (std::size_t k = 0; k < epsilons.size(); ++k)
      acc[k] += std::pow(double(l), 2.0 * (s + 2.0 + epsilons[k])) * al_u;
    input_acc += (1.0 + std::pow(double(l), 2.0 * s)) * fl * fl;
    while (next < rep.l_maxes.size() && l == rep.l_maxes[next]) {
      for (std::size_t k = 0; k < epsilons.size(); ++k) rep.partial[k].push_back(acc[k]);
      rep.input_partial.push_back(input_acc);
      ++next;
    }
  }

  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    bool divergent = true;
    for (std::size_t i = 0; i + 1 < rep.l_maxes.size(); ++i) {
      double growth = rep.partial[k][i + 1] / rep.partial[k][i];
      double decades = std::log10(double(rep.l_maxes[i + 1]) / double(rep.l_maxes[i]));
      if (growth < std::pow(2.0, decades)) divergent = false;
    }
    rep.divergent.push_back(divergent);
  }
  return rep;
}

}  // namespace spherediff
