#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "spherediff/bernstein.hpp"
#include "spherediff/laplace.hpp"
#include "spherediff/mittag_leffler.hpp"
#include "spherediff/subordinator.hpp"

namespace spherediff {

enum class EfunEngine { closed_form, laplace, monte_carlo };

inline const char* to_string(EfunEngine e) {
  switch (e) {
    case EfunEngine::closed_form: return "closed_form";
    case EfunEngine::laplace: return "laplace";
    case EfunEngine::monte_carlo: return "monte_carlo";
  }
  return "?";
}

/// One evaluation request for e_Phi(t; lambda) = E[exp(lambda L_Phi(t))].
/// The spectral eigenvalues i mu m - l(l+1) all satisfy Re(lambda) <= 0.
struct EigenfunctionQuery {
  BernsteinSpec spec;
  double t = 1.0;
  std::complex<double> lam = 0.0;
  EfunEngine engine = EfunEngine::laplace;
  long budget = 20000;         // Monte Carlo samples
  std::uint64_t seed = 12345;  // Monte Carlo stream seed
  int workers = 1;
};

struct EfunValue {
  std::complex<double> value;
  double err;  // one-sigma-style absolute uncertainty estimate
};

/// Inverse-subordinator samples for the Monte Carlo engine, drawn on
/// per-worker streams and merged in worker order (reproducible for a fixed
/// worker count).
inline std::vector<double> sample_inverse_batch(const BernsteinSpec& spec, double t, long n,
                                                double ds, std::uint64_t seed, int workers = 1) {
  if (workers < 1) workers = 1;
  std::vector<std::vector<double>> parts(workers);
  auto run = [&](int w) {
    RngStream rng(seed, std::uint64_t(w));
    long lo = n * w / workers, hi = n * (w + 1) / workers;
    parts[w].reserve(hi - lo);
    for (long i = lo; i < hi; ++i) parts[w].push_back(sample_inverse(spec, t, ds, rng).l_value);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::vector<double> all;
  all.reserve(n);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

/// Mean of exp(lambda * L) over first-passage samples. The half-step shift
/// centers the first-passage discretization bias of the L grid.
inline EfunValue efun_mc_from_samples(std::span<const double> l_samples,
                                      std::complex<double> lam, double ds) {
  std::complex<double> sum = 0.0;
  double sum_re2 = 0.0, sum_im2 = 0.0;
  for (double l : l_samples) {
    double shifted = std::max(l - 0.5 * ds, 0.0);
    std::complex<double> v = std::exp(lam * shifted);
    sum += v;
    sum_re2 += v.real() * v.real();
    sum_im2 += v.imag() * v.imag();
  }
  double n = double(l_samples.size());
  std::complex<double> mean = sum / n;
  double var_re = std::max(sum_re2 / n - mean.real() * mean.real(), 0.0);
  double var_im = std::max(sum_im2 / n - mean.imag() * mean.imag(), 0.0);
  double se = std::sqrt((var_re + var_im) / n);
  double bias = 0.5 * ds * std::abs(lam) * std::abs(mean);
  return {mean, se + bias};
}

inline EfunValue efun(const EigenfunctionQuery& q) {
  if (!(q.t > 0.0)) throw std::domain_error("efun: t must be > 0");
  if (q.lam.real() > 1e-12) throw std::domain_error("efun: Re(lambda) must be <= 0");
  if (q.lam == std::complex<double>(0.0)) return {1.0, 0.0};
  if (q.spec.is_degenerate_clock()) return {std::exp(q.lam * q.t), 0.0};

  switch (q.engine) {
    case EfunEngine::closed_form: {
      if (q.spec.kind() != BernsteinKind::stable)
        throw std::invalid_argument("efun: closed_form engine requires the stable kind");
      auto ml = mittag_leffler(q.spec.alpha(), q.lam * std::pow(q.t, q.spec.alpha()));
      return {ml.value, ml.err};
    }
    case EfunEngine::laplace: {
      auto inv = talbot_inverse_checked(
          [&q](std::complex<double> s) {
            std::complex<double> phi = q.spec.phi_complex(s);
            return phi / (s * (phi - q.lam));
          },
          q.t);
      return {inv.value, inv.err};
    }
    case EfunEngine::monte_carlo: {
      double ds = default_inverse_step(q.t);
      auto samples = sample_inverse_batch(q.spec, q.t, q.budget, ds, q.seed, q.workers);
      return efun_mc_from_samples(samples, q.lam, ds);
    }
  }
  return {0.0, 0.0};
}

/// Cached e_Phi(t; i mu m - l(l+1)) over the truncation window. Entries for
/// m < 0 come from the conjugation symmetry of real L_Phi.
class EigenfunctionTable {
 public:
  EigenfunctionTable(const BernsteinSpec& spec, double mu, int l_max, double t,
                     EfunEngine engine = EfunEngine::laplace)
      : mu_(mu), l_max_(l_max), t_(t), v_(std::size_t(l_max + 1) * (l_max + 1)),
        e_(std::size_t(l_max + 1) * (l_max + 1)) {
    EigenfunctionQuery q{spec, t, 0.0, engine};
    for (int l = 0; l <= l_max; ++l) {
      for (int m = 0; m <= l; ++m) {
        q.lam = {-double(l) * (l + 1), mu * m};
        EfunValue ev = (l == 0 && m == 0) ? EfunValue{1.0, 0.0} : efun(q);
        at(l, m) = ev.value;
        err_at(l, m) = ev.err;
        if (m > 0) {
          at(l, -m) = std::conj(ev.value);
          err_at(l, -m) = ev.err;
        }
      }
    }
  }

  std::complex<double> value(int l, int m) const { return v_[index(l, m)]; }
  double err(int l, int m) const { return e_[index(l, m)]; }
  double mu() const { return mu_; }
  double t() const { return t_; }
  int l_max() const { return l_max_; }

  nlohmann::json to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (int l = 0; l <= l_max_; ++l)
      for (int m = -l; m <= l; ++m)
        entries.push_back({{"l", l},
                           {"m", m},
                           {"value_re", value(l, m).real()},
                           {"value_im", value(l, m).imag()},
                           {"err", err(l, m)}});
    return entries;
  }

 private:
  std::size_t index(int l, int m) const {
    if (l < 0 || l > l_max_ || std::abs(m) > l)
      throw std::out_of_range("EigenfunctionTable: (l, m) out of range");
    return std::size_t(l) * l + (m + l);
  }
  std::complex<double>& at(int l, int m) { return v_[index(l, m)]; }
  double& err_at(int l, int m) { return e_[index(l, m)]; }

  double mu_;
  int l_max_;
  double t_;
  std::vector<std::complex<double>> v_;
  std::vector<double> e_;
};

/// Engine a solver should use when the caller does not care: the stable
/// closed form where it exists, contour inversion otherwise.
inline EfunEngine preferred_engine(const BernsteinSpec& spec) {
  return spec.kind() == BernsteinKind::stable ? EfunEngine::closed_form : EfunEngine::laplace;
}

}  // namespace spherediff
