#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spherediff/subordinator.hpp"

using namespace spherediff;

namespace {

struct LaplaceCheck {
  double mc;
  double exact;
  double se;
};

LaplaceCheck laplace_law(const BernsteinSpec& spec, double lam, double t, int n_paths,
                         double ds, unsigned seed) {
  RngStream rng(seed);
  double sum = 0.0, sum2 = 0.0;
  long steps = std::lround(t / ds);
  for (int i = 0; i < n_paths; ++i) {
    double s_value = 0.0;
    for (long k = 0; k < steps; ++k) s_value += subordinator_increment(spec, ds, rng);
    double v = std::exp(-lam * s_value);
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / n_paths;
  double var = std::max(sum2 / n_paths - mean * mean, 0.0);
  double exact = std::exp(-t * phi_eval(spec, lam).real());
  return {mean, exact, std::sqrt(var / n_paths)};
}

}  // namespace

TEST_CASE("sample_path produces a nondecreasing staircase from zero") {
  for (const char* text : {"stable:0.5", "tempered:0.7,1.5", "gamma", "geostable:0.7"}) {
    RngStream rng(42);
    auto path = sample_path(BernsteinSpec::parse(text), 2.0, 0.01, rng);
    REQUIRE(path.values.size() == 201);
    CHECK(path.values[0] == 0.0);
    CHECK(std::is_sorted(path.values.begin(), path.values.end()));
  }
  RngStream rng(1);
  CHECK_THROWS_AS(sample_path(BernsteinSpec::gamma(), 1.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_path(BernsteinSpec::gamma(), 0.001, 0.01, rng), std::invalid_argument);
}

TEST_CASE("Laplace-exponent law E[e^{-lambda S(t)}] = e^{-t Phi(lambda)}") {
  unsigned seed = 1000;
  for (const char* text : {"stable:0.5", "tempered:0.7,1.5", "gamma", "geostable:0.7"}) {
    auto spec = BernsteinSpec::parse(text);
    for (double lam : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0}) {
        auto c = laplace_law(spec, lam, t, 4000, 0.02, seed++);
        INFO(text << " lambda=" << lam << " t=" << t);
        CHECK(std::abs(c.mc - c.exact) <= 3.0 * c.se + 1e-12);
      }
  }
}

TEST_CASE("stable 1/2 subordinator has the Levy-distribution CDF") {
  auto spec = BernsteinSpec::stable(0.5);
  RngStream rng(7);
  const int n = 20000;
  std::vector<double> s1(n);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = 0; k < 50; ++k) v += subordinator_increment(spec, 0.02, rng);
    s1[i] = v;
  }
  for (double x : {0.5, 1.0, 2.0}) {
    double emp = double(std::count_if(s1.begin(), s1.end(), [x](double v) { return v <= x; })) / n;
    double exact = std::erfc(1.0 / (2.0 * std::sqrt(x)));
    INFO("x = " << x);
    CHECK(std::abs(emp - exact) < 0.01);
  }
}

TEST_CASE("invert_path on a deterministic staircase") {
  SubordinatorPath path;
  path.ds = 0.1;
  for (int k = 0; k <= 20; ++k) path.values.push_back(2.0 * (0.1 * k));
  auto inv = invert_path(path, 1.0);
  // first grid time with S > 1: S(0.6) = 1.2
  CHECK(inv.l_value == Catch::Approx(0.6));
  CHECK(inv.resolution == 0.1);
  CHECK(inv.t == 1.0);

  CHECK_THROWS_AS(invert_path(path, 5.0), PathExhausted);
  CHECK_THROWS_AS(invert_path(path, 0.0), std::domain_error);
}

TEST_CASE("inversion is monotone in t on a fixed path") {
  RngStream rng(11);
  auto path = sample_path(BernsteinSpec::gamma(), 30.0, 0.01, rng);
  double t_hi = path.max_value() * 0.9;
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double t = t_hi * i / 20.0;
    double l = invert_path(path, t).l_value;
    CHECK(l >= prev);
    prev = l;
  }
}

TEST_CASE("extend_path grows a trajectory without disturbing its prefix") {
  RngStream rng(13);
  auto path = sample_path(BernsteinSpec::stable(0.7), 1.0, 0.01, rng);
  auto prefix = path.values;
  extend_path(path, BernsteinSpec::stable(0.7), 4.0, rng);
  REQUIRE(path.values.size() >= 401);
  for (std::size_t k = 0; k < prefix.size(); ++k) CHECK(path.values[k] == prefix[k]);
  CHECK(std::is_sorted(path.values.begin(), path.values.end()));
}

TEST_CASE("sample_inverse mean matches E[L(t)] = t^alpha / Gamma(1+alpha)") {
  auto spec = BernsteinSpec::stable(0.5);
  RngStream rng(17);
  const int n = 20000;
  double ds = 1e-3;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double l = sample_inverse(spec, 1.0, ds, rng).l_value;
    sum += l;
    sum2 += l * l;
  }
  double mean = sum / n;
  double se = std::sqrt((sum2 / n - mean * mean) / n);
  double exact = 1.0 / std::tgamma(1.5);
  CHECK(std::abs(mean - exact) <= 3.0 * se + ds);
}

TEST_CASE("first-passage bias shrinks with the grid step") {
  // deterministic clock S(s) = s: L(t) = t exactly; the sampled value
  // overshoots by at most one step
  auto spec = BernsteinSpec::stable(1.0);
  RngStream rng(23);
  for (double ds : {0.1, 0.05, 0.025}) {
    SubordinatorPath path;
    path.ds = ds;
    for (int k = 0; k * ds <= 3.0; ++k) path.values.push_back(k * ds);
    double l = invert_path(path, 1.0).l_value;
    CHECK(l >= 1.0);
    CHECK(l <= 1.0 + ds + 1e-12);
  }
}

TEST_CASE("inverse density histogram is a probability mass function") {
  RngStream rng(29);
  auto h = inverse_density_estimate(BernsteinSpec::gamma(), 1.0, 10000, 30, rng);
  double total = std::accumulate(h.mass.begin(), h.mass.end(), 0.0);
  CHECK(total == Catch::Approx(1.0).margin(1e-12));
  for (double m : h.mass) CHECK(m >= 0.0);
  CHECK_THROWS_AS(inverse_density_estimate(BernsteinSpec::gamma(), 1.0, 100, 30, rng),
                  std::invalid_argument);
}

TEST_CASE("inverse of the stable 1/2 subordinator is half-Gaussian") {
  // f_L(s; 1) = e^{-s^2/4} / sqrt(pi), the |N(0, 2)| law
  auto spec = BernsteinSpec::stable(0.5);
  RngStream rng(31);
  const int n = 100000;
  auto h = inverse_density_estimate(spec, 1.0, n, 40, rng);
  double sup_model = 0.0;
  for (std::size_t b = 0; b < h.size(); ++b) {
    double s = h.center(b);
    double exact = std::exp(-s * s / 4.0) / std::sqrt(pi);
    sup_model = std::max(sup_model, std::abs(h.density(b) - exact));
  }
  CHECK(sup_model < 0.02);

  // independent oracle: histogram of |N(0,2)| samples through the same bins
  RngStream grng(37);
  Histogram1D g;
  g.edges = h.edges;
  g.mass.assign(h.size(), 0.0);
  double hi = h.edges.back();
  for (int i = 0; i < n; ++i) {
    double v = std::abs(std::sqrt(2.0) * grng.normal());
    if (v >= hi) continue;
    std::size_t b = std::min(std::size_t(v / hi * h.size()), h.size() - 1);
    g.mass[b] += 1.0 / n;
  }
  double sup_mc = 0.0;
  for (std::size_t b = 0; b < h.size(); ++b)
    sup_mc = std::max(sup_mc, std::abs(h.density(b) - g.density(b)));
  CHECK(sup_mc < 0.02);
}
