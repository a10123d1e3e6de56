#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "spherediff/coefficients.hpp"
#include "spherediff/transform.hpp"

using namespace spherediff;

namespace {

HarmonicCoefficients random_coefficients(int l_max, unsigned seed, bool real_symmetric = false) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  HarmonicCoefficients c(l_max);
  for (int l = 0; l <= l_max; ++l) {
    c(l, 0) = real_symmetric ? complexd(gauss(gen), 0.0) : complexd(gauss(gen), gauss(gen));
    for (int m = 1; m <= l; ++m) {
      c(l, m) = complexd(gauss(gen), gauss(gen));
      if (real_symmetric)
        c(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(c(l, m));
      else
        c(l, -m) = complexd(gauss(gen), gauss(gen));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("analyze recovers a single harmonic") {
  auto f = [](const SphericalPoint& x) { return ylm(3, 2, x); };
  auto c = analyze(f, 6);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) {
      if (l == 3 && m == 2)
        CHECK(std::abs(c(l, m) - complexd(1.0)) < 1e-10);
      else
        CHECK(std::abs(c(l, m)) < 1e-10);
    }
}

TEST_CASE("analyze of the constant function") {
  auto c = analyze([](const SphericalPoint&) { return complexd(1.0); }, 4);
  CHECK(c(0, 0).real() == Catch::Approx(std::sqrt(4.0 * pi)).margin(1e-12));
  for (int l = 1; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(c(l, m)) < 1e-12);
}

TEST_CASE("analyze rejects too-coarse grids") {
  SphericalGrid grid(5, 9);  // enough for l_max = 4 only
  CHECK_THROWS_AS(analyze(grid, 5), std::invalid_argument);
  CHECK_NOTHROW(analyze(grid, 4));
}

TEST_CASE("round trip analyze . synthesize is the identity on band-limited data") {
  auto c = random_coefficients(20, 99);
  auto back = analyze([&c](const SphericalPoint& x) { return synthesize(c, x); }, 20);
  double worst = 0.0;
  for (int l = 0; l <= 20; ++l)
    for (int m = -l; m <= l; ++m) worst = std::max(worst, std::abs(back(l, m) - c(l, m)));
  CHECK(worst < 1e-9);
}

TEST_CASE("synthesize of a pure (5,-3) mode round trips pointwise") {
  auto c0 = analyze([](const SphericalPoint& x) { return ylm(5, -3, x); }, 8);
  std::mt19937 gen(51);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    SphericalPoint x(std::acos(1.0 - 2.0 * u01(gen)), two_pi * u01(gen));
    CHECK(std::abs(synthesize(c0, x) - ylm(5, -3, x)) < 1e-10);
  }
}

TEST_CASE("Parseval: quadrature energy equals spectral energy") {
  auto c = random_coefficients(20, 7);
  SphericalGrid grid(24, 48);
  for (int i = 0; i < grid.n_theta(); ++i) {
    NormalizedLegendreTable pt(c.l_max(), grid.cos_theta(i));
    for (int j = 0; j < grid.n_phi(); ++j) {
      complexd v = synthesize(c, grid.point(i, j));
      grid.value(i, j) = std::norm(v);  // |f|^2 as the integrand
    }
  }
  double quad = grid.integrate().real();
  PowerSpectrum a(c);
  CHECK(quad == Catch::Approx(a.total()).epsilon(1e-8));
  CHECK(a.total() == Catch::Approx(c.l2_norm_squared()).margin(1e-12));
}

TEST_CASE("orthonormality of sampled harmonics under quadrature") {
  SphericalGrid grid(31, 61);
  auto inner = [&grid](int l1, int m1, int l2, int m2) {
    SphericalGrid g(31, 61);
    for (int i = 0; i < g.n_theta(); ++i)
      for (int j = 0; j < g.n_phi(); ++j) {
        auto x = g.point(i, j);
        g.value(i, j) = ylm(l1, m1, x) * std::conj(ylm(l2, m2, x));
      }
    return g.integrate();
  };
  CHECK(std::abs(inner(0, 0, 0, 0) - complexd(1.0)) < 1e-10);
  CHECK(std::abs(inner(30, 14, 30, 14) - complexd(1.0)) < 1e-10);
  CHECK(std::abs(inner(30, -7, 30, -7) - complexd(1.0)) < 1e-10);
  CHECK(std::abs(inner(12, 3, 12, -3)) < 1e-10);
  CHECK(std::abs(inner(12, 3, 14, 3)) < 1e-10);
  CHECK(std::abs(inner(29, 11, 30, 11)) < 1e-10);
}

TEST_CASE("analyze preserves real symmetry") {
  auto c = random_coefficients(10, 13, true);
  REQUIRE(c.is_real_symmetric());
  auto back = analyze([&c](const SphericalPoint& x) { return synthesize(c, x); }, 10);
  CHECK(back.is_real_symmetric());
}

TEST_CASE("JSON round trip of coefficients") {
  auto c = random_coefficients(6, 21);
  auto j = to_json(c);
  CHECK(j["l_max"] == 6);
  CHECK(j["coeffs"].size() == 49);
  auto back = coefficients_from_json(j);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) CHECK(back(l, m) == c(l, m));
}

TEST_CASE("sobolev seminorm spot values") {
  HarmonicCoefficients constant(3);
  constant(0, 0) = 2.0;
  CHECK(sobolev_seminorm(constant, 1.0) == 0.0);

  auto unit = HarmonicCoefficients::single(2, 0);
  CHECK(sobolev_seminorm(unit, 1.0) == Catch::Approx(2.0));

  CHECK_THROWS_AS(sobolev_seminorm(unit, -0.5), std::domain_error);
}

TEST_CASE("sobolev seminorm partial sums approach zeta(2) for A_l = l^{-2s-2}") {
  double s = 1.25;
  auto partial = [&](int l_max) {
    HarmonicCoefficients c(l_max);
    for (int l = 1; l <= l_max; ++l) c(l, 0) = std::pow(double(l), -(s + 1.0));
    double v = sobolev_seminorm(c, s);
    return v * v;
  };
  double zeta2 = pi * pi / 6.0;
  double gap500 = zeta2 - partial(500);
  double gap2000 = zeta2 - partial(2000);
  CHECK(gap500 > 0.0);
  CHECK(gap2000 > 0.0);
  CHECK(gap2000 < gap500);
  CHECK(gap2000 == Catch::Approx(1.0 / 2000.0).epsilon(0.05));
}

TEST_CASE("cap indicator analyzed by quadrature approaches the analytic coefficients") {
  double theta0 = 0.8;
  double c0 = std::cos(theta0);
  auto indicator = [theta0](const SphericalPoint& x) {
    return complexd(x.theta() <= theta0 ? 1.0 : 0.0);
  };
  auto exact = [c0](int l) {
    if (l == 0) return std::sqrt(pi) * (1.0 - c0);
    return std::sqrt(pi / (2.0 * l + 1.0)) * (legendre_p(l - 1, c0) - legendre_p(l + 1, c0));
  };
  int l_max = 12;
  auto coarse = analyze(indicator, l_max, 8);
  auto fine = analyze(indicator, l_max, 40);
  double err_coarse = 0.0, err_fine = 0.0;
  for (int l = 0; l <= l_max; ++l) {
    err_coarse = std::max(err_coarse, std::abs(coarse(l, 0) - complexd(exact(l))));
    err_fine = std::max(err_fine, std::abs(fine(l, 0) - complexd(exact(l))));
  }
  // indicators are not band-limited: quadrature error is O(grid), accepted
  CHECK(err_fine < err_coarse);
  CHECK(err_fine < 0.05);
}
