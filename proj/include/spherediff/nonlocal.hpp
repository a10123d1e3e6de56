#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherediff/bernstein.hpp"
#include "spherediff/eigenfunction.hpp"

namespace spherediff {

/// Product-integration discretization of the Caputo-type operator
///   D^Phi u(t) = d/dt integral_0^t nu_bar(t - tau) (u(tau) - u(0)) dtau
/// on a uniform grid t_k = k dt. With u piecewise linear the derivative
/// collapses to a convolution of increments against
///   w_g = integral over one step of nu_bar, gap g steps back.
/// The stable kind integrates nu_bar exactly through its antiderivative;
/// the other kinds use midpoint quadrature of the (cached) Talbot values.
/// First-order accurate in dt.
class NonlocalDerivative {
 public:
  NonlocalDerivative(const BernsteinSpec& spec, double dt, int n_max) : dt_(dt), w_(n_max) {
    if (!(dt > 0.0)) throw std::domain_error("NonlocalDerivative: dt must be > 0");
    if (n_max < 1) throw std::domain_error("NonlocalDerivative: n_max must be >= 1");
    if (spec.kind() == BernsteinKind::stable && !spec.is_degenerate_clock()) {
      double prev = 0.0;
      for (int g = 1; g <= n_max; ++g) {
        double cur = levy_tail_antiderivative(spec, g * dt);
        w_[g - 1] = cur - prev;
        prev = cur;
      }
    } else {
      for (int g = 1; g <= n_max; ++g)
        w_[g - 1] = dt * levy_tail(spec, (g - 0.5) * dt);
    }
  }

  double dt() const { return dt_; }
  int n_max() const { return int(w_.size()); }

  /// D^Phi u at grid index j, from samples u[0..j].
  template <typename T>
  T operator()(std::span<const T> u, int j) const {
    if (j < 2) throw std::invalid_argument("NonlocalDerivative: grid too short (j < 2)");
    if (j >= int(u.size()) || j > n_max())
      throw std::out_of_range("NonlocalDerivative: j beyond grid or weight table");
    T acc{};
    for (int k = 0; k < j; ++k)
      acc += (u[k + 1] - u[k]) * w_[j - k - 1];
    return acc / dt_;
  }

 private:
  double dt_;
  std::vector<double> w_;
};

/// Free-function form of the operator for one-off use.
template <typename T>
T nonlocal_derivative(std::span<const T> u, double dt, const BernsteinSpec& spec, int j) {
  NonlocalDerivative d(spec, dt, j);
  return d(u, j);
}

struct GrowthResidual {
  double max_residual;
  std::vector<double> t;
  std::vector<double> residual;
};

/// Residual |D^Phi e_Phi(t; lambda) - lambda e_Phi(t; lambda)| on a uniform
/// grid; the core correctness gate for the eigenfunction engines.
inline GrowthResidual growth_residual(const BernsteinSpec& spec, std::complex<double> lam,
                                      double dt, double t_end, double t_min = 0.1,
                                      EfunEngine engine = EfunEngine::laplace) {
  if (lam.real() > 1e-12) throw std::domain_error("growth_residual: Re(lambda) must be <= 0");
  int n = int(std::round(t_end / dt));
  std::vector<std::complex<double>> u(n + 1);
  u[0] = 1.0;
  EigenfunctionQuery q{spec, 1.0, lam, engine};
  for (int k = 1; k <= n; ++k) {
    q.t = k * dt;
    u[k] = efun(q).value;
  }
  if (lam == std::complex<double>(0.0)) {
    std::vector<double> ts, rs;
    for (int j = 2; j <= n; ++j)
      if (j * dt >= t_min) {
        ts.push_back(j * dt);
        rs.push_back(0.0);
      }
    return {0.0, ts, rs};
  }

  NonlocalDerivative d(spec, dt, n);
  GrowthResidual out{0.0, {}, {}};
  for (int j = 2; j <= n; ++j) {
    double t = j * dt;
    if (t < t_min) continue;
    std::complex<double> r = d(std::span<const std::complex<double>>(u), j) - lam * u[j];
    out.t.push_back(t);
    out.residual.push_back(std::abs(r));
    out.max_residual = std::max(out.max_residual, std::abs(r));
  }
  return out;
}

struct RelaxationSeries {
  std::vector<double> t;
  std::vector<double> ratio;  // Gamma(1+alpha) t^alpha lambda e_Phi(t; -lambda) / (alpha L(1/t))
};

/// Regular-variation index and slowly varying factor of Phi at 0, for the
/// kinds where they are standard. Tempered stable has index 0 with a
/// nonstandard factor and is rejected; so is the degenerate alpha = 1.
inline bool relaxation_supported(const BernsteinSpec& spec) {
  switch (spec.kind()) {
    case BernsteinKind::stable:
      return spec.alpha() < 1.0;
    case BernsteinKind::geometric_stable:
      return true;
    default:
      return false;
  }
}

inline double slowly_varying_factor(const BernsteinSpec& spec, double lam) {
  switch (spec.kind()) {
    case BernsteinKind::stable:
      return 1.0;
    case BernsteinKind::geometric_stable:
      return std::log(1.0 + std::pow(lam, spec.alpha())) / std::pow(lam, spec.alpha());
    default:
      throw std::invalid_argument("slowly_varying_factor: unsupported spec");
  }
}

inline RelaxationSeries relaxation_asymptotics(const BernsteinSpec& spec, double lam,
                                               std::span<const double> t_grid,
                                               EfunEngine engine = EfunEngine::laplace) {
  if (!(lam > 0.0)) throw std::domain_error("relaxation_asymptotics: lambda must be > 0");
  if (!relaxation_supported(spec))
    throw std::invalid_argument("relaxation_asymptotics: unsupported spec (no (alpha, L) pair)");
  double alpha = spec.alpha();
  RelaxationSeries out;
  EigenfunctionQuery q{spec, 1.0, -lam,
                       spec.kind() == BernsteinKind::stable ? EfunEngine::closed_form : engine};
  for (double t : t_grid) {
    q.t = t;
    double e = efun(q).value.real();
    double denom = alpha * slowly_varying_factor(spec, 1.0 / t);
    out.t.push_back(t);
    out.ratio.push_back(std::tgamma(1.0 + alpha) * std::pow(t, alpha) * lam * e / denom);
  }
  return out;
}

inline std::vector<double> log_grid(double t0, double t1, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = t0 * std::pow(t1 / t0, double(i) / (n - 1));
  return g;
}

}  // namespace spherediff
