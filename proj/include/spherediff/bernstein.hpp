#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "spherediff/laplace.hpp"
#include "spherediff/rng.hpp"

namespace spherediff {

enum class BernsteinKind { stable, tempered_stable, gamma, geometric_stable };

/// Laplace exponent Phi of a driftless, infinite-activity subordinator.
/// Supported kinds: lambda^alpha, (lambda+theta)^alpha - theta^alpha,
/// log(1+lambda), log(1+lambda^alpha).
///
/// alpha = 1 is admitted for the stable kind as the degenerate deterministic
/// clock S(s) = s (so L(t) = t and e_Phi(t;lambda) = e^{lambda t}); it backs
/// the consistency check against the classical solver. Operations that need
/// the Levy tail reject it.
class BernsteinSpec {
 public:
  BernsteinSpec(BernsteinKind kind, double alpha = 0.0, double theta = 0.0)
      : kind_(kind), alpha_(alpha), theta_(theta) {
    switch (kind_) {
      case BernsteinKind::stable:
        if (!(alpha > 0.0 && alpha <= 1.0))
          throw std::domain_error("BernsteinSpec: stable needs alpha in (0, 1]");
        break;
      case BernsteinKind::tempered_stable:
        if (!(alpha > 0.0 && alpha < 1.0) || !(theta > 0.0))
          throw std::domain_error("BernsteinSpec: tempered needs alpha in (0,1), theta > 0");
        break;
      case BernsteinKind::gamma:
        break;
      case BernsteinKind::geometric_stable:
        if (!(alpha > 0.0 && alpha < 1.0))
          throw std::domain_error("BernsteinSpec: geostable needs alpha in (0, 1)");
        break;
    }
    check_shape();
  }

  static BernsteinSpec stable(double alpha) { return {BernsteinKind::stable, alpha}; }
  static BernsteinSpec tempered(double alpha, double theta) {
    return {BernsteinKind::tempered_stable, alpha, theta};
  }
  static BernsteinSpec gamma() { return {BernsteinKind::gamma}; }
  static BernsteinSpec geostable(double alpha) { return {BernsteinKind::geometric_stable, alpha}; }

  BernsteinKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }

  bool is_degenerate_clock() const {
    return kind_ == BernsteinKind::stable && alpha_ == 1.0;
  }

  /// Principal-branch evaluation on the cut plane; used on inversion
  /// contours where Re(s) < 0 is legitimate.
  std::complex<double> phi_complex(std::complex<double> lam) const {
    switch (kind_) {
      case BernsteinKind::stable:
        return std::pow(lam, alpha_);
      case BernsteinKind::tempered_stable:
        return std::pow(lam + theta_, alpha_) - std::pow(theta_, alpha_);
      case BernsteinKind::gamma:
        return std::log(1.0 + lam);
      case BernsteinKind::geometric_stable:
        return std::log(1.0 + std::pow(lam, alpha_));
    }
    return 0.0;
  }

  /// "stable:0.7" | "tempered:0.7,1.5" | "gamma" | "geostable:0.7"
  static BernsteinSpec parse(const std::string& text) {
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
      if (name == "stable") return stable(std::stod(args));
      if (name == "tempered") {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("tempered needs alpha,theta");
        return tempered(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
      }
      if (name == "gamma") return gamma();
      if (name == "geostable") return geostable(std::stod(args));
    } catch (const std::domain_error&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("BernsteinSpec: cannot parse '" + text + "'");
    }
    throw std::invalid_argument("BernsteinSpec: unknown kind in '" + text + "'");
  }

  std::string to_string() const {
    switch (kind_) {
      case BernsteinKind::stable:
        return "stable:" + format(alpha_);
      case BernsteinKind::tempered_stable:
        return "tempered:" + format(alpha_) + "," + format(theta_);
      case BernsteinKind::gamma:
        return "gamma";
      case BernsteinKind::geometric_stable:
        return "geostable:" + format(alpha_);
    }
    return "";
  }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
  }

  // Phi(0) = 0, increasing, concave, sampled on 100 points.
  void check_shape() const {
    if (std::abs(phi_complex(0.0)) > 1e-14)
      throw std::logic_error("BernsteinSpec: Phi(0) != 0");
    double prev = 0.0, prev_diff = -1.0;
    bool have_diff = false;
    for (int i = 1; i <= 100; ++i) {
      double lam = 0.1 * i;
      double v = phi_complex(lam).real();
      double diff = v - prev;
      if (diff <= 0.0) throw std::logic_error("BernsteinSpec: Phi not increasing");
      if (have_diff && diff > prev_diff + 1e-12)
        throw std::logic_error("BernsteinSpec: Phi not concave");
      prev = v;
      prev_diff = diff;
      have_diff = true;
    }
  }

  BernsteinKind kind_;
  double alpha_;
  double theta_;
};

/// Phi(lambda) for Re(lambda) >= 0 (principal branch for complex input).
inline std::complex<double> phi_eval(const BernsteinSpec& spec, std::complex<double> lam) {
  if (lam.real() < 0.0) throw std::domain_error("phi_eval: Re(lambda) must be >= 0");
  return spec.phi_complex(lam);
}

struct LevyTail {
  double value;
  double err;
  bool converged;
};

/// Tail nu_bar(t) of the Levy measure. Stable kind in closed form
/// t^{-alpha}/Gamma(1-alpha); other kinds by Talbot inversion of
/// Phi(lambda)/lambda: 1e-6 relative down to the contour's absolute noise
/// floor (~5e-12 in doubles), absolute below it. Exponentially small tails
/// past that floor read as 0.
inline LevyTail levy_tail_checked(const BernsteinSpec& spec, double t) {
  if (!(t > 0.0)) throw std::domain_error("levy_tail: t must be > 0");
  if (spec.is_degenerate_clock())
    throw std::domain_error("levy_tail: degenerate clock alpha=1 has no Levy measure");
  if (spec.kind() == BernsteinKind::stable) {
    double a = spec.alpha();
    return {std::pow(t, -a) / std::tgamma(1.0 - a), 0.0, true};
  }
  auto inv = talbot_inverse_checked(
      [&spec](std::complex<double> s) { return spec.phi_complex(s) / s; }, t);
  double v = inv.value.real();
  constexpr double abs_floor = 5e-12;
  bool ok = inv.err <= std::max(1e-6 * std::abs(v), abs_floor);
  if (v < 0.0 && -v <= abs_floor) v = 0.0;  // noise around an exponentially small tail
  return {v, inv.err, ok};
}

inline double levy_tail(const BernsteinSpec& spec, double t) {
  auto r = levy_tail_checked(spec, t);
  if (!r.converged) throw std::runtime_error("levy_tail: inversion did not converge");
  return r.value;
}

/// Antiderivative V(x) = integral_0^x nu_bar(r) dr, i.e. the inverse
/// transform of Phi(lambda)/lambda^2. Exact for the stable kind.
inline double levy_tail_antiderivative(const BernsteinSpec& spec, double x) {
  if (!(x >= 0.0)) throw std::domain_error("levy_tail_antiderivative: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (spec.kind() == BernsteinKind::stable) {
    double a = spec.alpha();
    return std::pow(x, 1.0 - a) / std::tgamma(2.0 - a);
  }
  return talbot_inverse(
             [&spec](std::complex<double> s) { return spec.phi_complex(s) / (s * s); }, x)
      .real();
}

}  // namespace spherediff
