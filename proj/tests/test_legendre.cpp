#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spherediff/legendre.hpp"

using namespace spherediff;

namespace {

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// Rodrigues-formula oracle, exact expansion of (s^2-1)^l followed by
// termwise differentiation. Factorials limit it to l <= 10, which is the
// point: this is the overflow-prone route the recurrence replaces.
double rodrigues_plm(int l, int m, double s) {
  double sum = 0.0;
  for (int k = 0; k <= l; ++k) {
    int e = 2 * k - l - m;  // exponent after l+m derivatives of s^{2k}
    if (e < 0) continue;
    double fall = 1.0;  // (2k)(2k-1)...(e+1)
    for (int j = e + 1; j <= 2 * k; ++j) fall *= j;
    double sign = ((l - k) % 2 == 0) ? 1.0 : -1.0;
    sum += binom(l, k) * sign * fall * std::pow(s, e);
  }
  double fact_l = 1.0;
  for (int i = 2; i <= l; ++i) fact_l *= i;
  double phase = (m % 2 == 0) ? 1.0 : -1.0;
  return phase / (std::pow(2.0, l) * fact_l) * std::pow(1.0 - s * s, m / 2.0) * sum;
}

}  // namespace

TEST_CASE("assoc_legendre matches the spec'd spot values") {
  CHECK(assoc_legendre(3, 1, 1.0) == 0.0);
  CHECK(assoc_legendre(5, 0, 1.0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(assoc_legendre(2, 0, 0.5) == Catch::Approx(-0.125).margin(1e-12));
  CHECK(assoc_legendre(4, 0, -1.0) == Catch::Approx(1.0).margin(1e-12));
  CHECK(assoc_legendre(5, 0, -1.0) == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("assoc_legendre agrees with the Rodrigues oracle for l <= 10") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> unif(-0.999, 0.999);
  for (int l = 0; l <= 10; ++l)
    for (int m = 0; m <= l; ++m)
      for (int rep = 0; rep < 5; ++rep) {
        double s = unif(gen);
        double ours = assoc_legendre(l, m, s);
        double oracle = rodrigues_plm(l, m, s);
        INFO("l=" << l << " m=" << m << " s=" << s);
        CHECK(ours == Catch::Approx(oracle).margin(1e-9 * (1.0 + std::abs(oracle))));
      }
}

TEST_CASE("assoc_legendre agrees with std::assoc_legendre up to the phase") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int l = 0; l <= 25; ++l)
    for (int m = 0; m <= l; m += (l > 6 ? 3 : 1)) {
      double s = unif(gen);
      double phase = (m % 2 == 0) ? 1.0 : -1.0;
      double ref = phase * std::assoc_legendre(unsigned(l), unsigned(m), s);
      CHECK(assoc_legendre(l, m, s) ==
            Catch::Approx(ref).margin(1e-9 * (1.0 + std::abs(ref))));
    }
}

TEST_CASE("assoc_legendre rejects bad arguments") {
  CHECK_THROWS_AS(assoc_legendre(2, 3, 0.5), std::domain_error);
  CHECK_THROWS_AS(assoc_legendre(2, 1, 1.5), std::domain_error);
}

TEST_CASE("normalized recurrence stays finite at high degree") {
  // Rodrigues would overflow far before l = 300
  double v = normalized_legendre(300, 150, 0.3);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 10.0);  // uniform bound sqrt((2l+1)/4pi) ~ 6.9
}

TEST_CASE("legendre_p three-term recurrence") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(1, 0.3) == Catch::Approx(0.3));
  CHECK(legendre_p(2, 0.5) == Catch::Approx(-0.125));
  CHECK(legendre_p(6, 1.0) == Catch::Approx(1.0));
  // P_3(x) = (5x^3 - 3x)/2
  double x = -0.42;
  CHECK(legendre_p(3, x) == Catch::Approx(0.5 * (5.0 * x * x * x - 3.0 * x)));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  auto rule = gauss_legendre(12);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == Catch::Approx(2.0).margin(1e-14));

  // exact through degree 2n-1 = 23
  for (int k = 0; k <= 23; ++k) {
    double q = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      q += rule.weights[i] * std::pow(rule.nodes[i], k);
    double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
    CHECK(q == Catch::Approx(exact).margin(1e-13));
  }
}

TEST_CASE("gauss_legendre orthogonality of Legendre polynomials") {
  auto rule = gauss_legendre(40);
  for (int l1 : {0, 3, 10, 25})
    for (int l2 : {0, 3, 10, 25}) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        q += rule.weights[i] * legendre_p(l1, rule.nodes[i]) * legendre_p(l2, rule.nodes[i]);
      double exact = (l1 == l2) ? 2.0 / (2.0 * l1 + 1.0) : 0.0;
      CHECK(q == Catch::Approx(exact).margin(1e-13));
    }
}

TEST_CASE("NormalizedLegendreTable matches the scalar routine") {
  NormalizedLegendreTable table(40, 0.37);
  for (int l = 0; l <= 40; l += 7)
    for (int m = 0; m <= l; m += 3)
      CHECK(table(l, m) == Catch::Approx(normalized_legendre(l, m, 0.37)).margin(1e-13));
}
