// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/models.hpp"
#include "dominance/random.hpp"
#include "oracles.hpp"

using namespace dominance;
using Catch::Approx;

namespace {

EmpiricalDistribution sample(std::initializer_list<double> values) { return empirical_from(values); }

}  // namespace

TEST_CASE("pi_empirical small cases", "[indices][pi]") {
  CHECK(pi_empirical(sample({1, 3}), sample({2, 4})) == 0.0);
  CHECK(pi_empirical(sample({2, 4}), sample({1, 3})) == 0.5);
  CHECK(pi_empirical(sample({1, 2, 5}), sample({1, 2, 5})) == 0.0);
  CHECK(pi_empirical(sample({1, 2, 3}), sample({4, 5, 6, 7})) == 0.0);
  CHECK(pi_empirical(sample({4, 5, 6, 7}), sample({1, 2, 3})) == 1.0);
}

TEST_CASE("pi contact point", "[indices][pi]") {
  const auto contact = pi_empirical_contact(sample({2, 4}), sample({1, 3}));
  CHECK(contact.pi == 0.5);
  CHECK(contact.x == 1.0);
  CHECK(contact.level == 0.5);
  const auto none = pi_empirical_contact(sample({1, 3}), sample({2, 4}));
  CHECK(none.pi == 0.0);
  CHECK(none.level == 0.0);
}

TEST_CASE("gamma_empirical hand-evaluated curves", "[indices][gamma]") {
  SECTION("quantiles of x below those of y everywhere") {
    const auto curve = gamma_empirical(sample({0, 2}), sample({1, 3}));
    REQUIRE(curve.breakpoints == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(curve.values[0] == 1.0);
    CHECK(curve.values[1] == 0.0);
    CHECK(curve.values[2] == -1.0);
    CHECK(curve.gamma_star == 0.0);
    CHECK(curve.gamma_hat == 0.0);
    CHECK(curve.psi_at_star == 1.0);
  }
  SECTION("quantiles of x above those of y everywhere") {
    const auto curve = gamma_empirical(sample({1, 3}), sample({0, 2}));
    CHECK(curve.gamma_hat == 1.0);
  }
  SECTION("single crossing at one half") {
    const auto curve = gamma_empirical(sample({0, 10}), sample({5, 6}));
    CHECK(curve.gamma_star == 0.5);
    CHECK(curve.psi_at_star == -4.5);
    CHECK(curve.gamma_hat == 0.5);
    CHECK_FALSE(curve.degenerate);
  }
  SECTION("identical samples") {
    const auto curve = gamma_empirical(sample({1, 4, 6}), sample({1, 4, 6}));
    CHECK(curve.degenerate);
    CHECK(curve.gamma_star == 0.0);
    CHECK(curve.gamma_hat == 0.0);
    for (double v : curve.values) CHECK(v == 0.0);
  }
}

TEST_CASE("psi is affine between breakpoints", "[indices][gamma]") {
  std::mt19937_64 engine(23);
  std::normal_distribution<double> normal;
  std::vector<double> xs(37), ys(23);
  for (double& v : xs) v = normal(engine);
  for (double& v : ys) v = 1.5 * normal(engine) + 0.3;
  const auto x = empirical_from(xs);
  const auto y = empirical_from(ys);
  const auto curve = gamma_empirical(x, y);
  for (std::size_t k = 1; k < curve.breakpoints.size(); ++k) {
    const double a = curve.breakpoints[k - 1];
    const double b = curve.breakpoints[k];
    const double mid = 0.5 * (a + b);
    const double slope = 2.0 * (x.quantile(mid) - y.quantile(mid));
    CHECK(curve.values[k] - curve.values[k - 1] == Approx(slope * (b - a)).margin(1e-12));
  }
}

TEST_CASE("empirical estimators match exhaustive enumeration", "[indices][oracle]") {
  std::mt19937_64 engine(29);
  std::uniform_int_distribution<int> size(2, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto xs = oracle::random_integers(engine, size(engine), -5, 5);
    const auto ys = oracle::random_integers(engine, size(engine), -5, 5);
    const auto x = empirical_from(xs);
    const auto y = empirical_from(ys);
    REQUIRE(pi_empirical(x, y) == oracle::pi_brute(xs, ys));
    const auto brute = oracle::psi_brute(xs, ys);
    const auto curve = gamma_empirical(x, y);
    REQUIRE(curve.breakpoints == brute.levels);
    const double nm = static_cast<double>(xs.size() * ys.size());
    for (std::size_t k = 0; k < curve.values.size(); ++k) {
      REQUIRE(std::abs(curve.values[k] * nm - static_cast<double>(brute.scaled[k])) <= 1e-9);
    }
    REQUIRE(curve.gamma_star == brute.gamma_star);
    REQUIRE(curve.gamma_hat == brute.gamma_hat);
    REQUIRE(curve.degenerate == brute.degenerate);
  }
}

TEST_CASE("psi endpoint identity", "[indices][gamma]") {
  RngStream rng(31, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = empirical_from(sample_normal(rng, 0.0, 1.0, 5 + trial % 50));
    const auto y = empirical_from(sample_normal(rng, 0.5, 2.0, 3 + trial % 70));
    const auto curve = gamma_empirical(x, y);
    const double scale = std::max(std::abs(curve.values.front()), 1e-300);
    CHECK(std::abs(curve.values.front() + curve.values.back()) <= 1e-9 * scale);
    CHECK(curve.values.front() == Approx(-(x.mean() - y.mean())).epsilon(1e-12));
  }
}

TEST_CASE("pi_empirical is rank invariant", "[indices][pi]") {
  RngStream rng(37, 0);
  for (int trial = 0; trial < 200; ++trial) {
    auto xs = sample_normal(rng, 0.0, 1.0, 20 + trial % 13);
    auto ys = sample_normal(rng, 0.2, 1.3, 15 + trial % 17);
    const double before = pi_empirical(empirical_from(xs), empirical_from(ys));
    for (double& v : xs) v = std::exp(3.0 * v) + v * v * v;
    for (double& v : ys) v = std::exp(3.0 * v) + v * v * v;
    CHECK(pi_empirical(empirical_from(xs), empirical_from(ys)) == before);
  }
}

TEST_CASE("gamma_hat is affine invariant", "[indices][gamma]") {
  RngStream rng(41, 0);
  for (int trial = 0; trial < 200; ++trial) {
    auto xs = sample_normal(rng, 0.0, 1.0, 30);
    auto ys = sample_normal(rng, 0.4, 1.6, 40);
    const auto before = gamma_empirical(empirical_from(xs), empirical_from(ys));
    const double a = 0.25 + 0.5 * (trial % 9);
    const double b = -3.0 + trial % 7;
    for (double& v : xs) v = a * v + b;
    for (double& v : ys) v = a * v + b;
    const auto after = gamma_empirical(empirical_from(xs), empirical_from(ys));
    CHECK(after.gamma_star == before.gamma_star);
    CHECK(after.gamma_hat == before.gamma_hat);
  }
}

TEST_CASE("pi never exceeds the crossing mass on the same samples", "[indices]") {
  RngStream rng(43, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = empirical_from(sample_normal(rng, 0.0, 1.0, 10 + trial % 40));
    const auto y = empirical_from(sample_normal(rng, 0.3 * (trial % 5) - 0.6, 0.5 + 0.1 * (trial % 20), 10 + trial % 31));
    CHECK(pi_empirical(x, y) <= crossing_mass_empirical(x, y) + 1e-12);
  }
}

TEST_CASE("normal closed forms at calibrated parameters", "[indices][normal]") {
  CHECK(pi_normal(0, 1, 0.3, 1) == 0.0);
  CHECK(pi_normal(0, 1, 0.0, 1) == 0.0);
  CHECK(pi_normal(0, 1, 0.143, 0.7) == Approx(0.05).margin(5e-4));
  CHECK(pi_normal(0, 1, 0.287, 1.5) == Approx(0.05).margin(5e-4));
  CHECK(pi_normal(0, 1, -0.125, 1) == Approx(0.05).margin(5e-4));
  CHECK(pi_normal(0, 1, -0.5, 1) == Approx(2.0 * std_normal_cdf(0.25) - 1.0).epsilon(1e-14));

  CHECK(gamma_normal(0, 1, 0.337, 1.5) == Approx(0.25).margin(1e-3));
  CHECK(gamma_normal(0, 1, 1.645, 2) == Approx(0.05).margin(5e-4));
  CHECK(gamma_normal(0, 1, 0.822, 1.5) == Approx(0.05).margin(5e-4));
  CHECK(gamma_normal(0, 1, 0.5, 1) == 0.0);
  CHECK(gamma_normal(0, 1, 0.0, 1) == 0.0);
  CHECK(gamma_normal(0, 1, -0.5, 1) == 1.0);

  CHECK_THROWS_AS(pi_normal(0, 0, 1, 1), DomainError);
  CHECK_THROWS_AS(gamma_normal(0, 1, 1, -2), DomainError);
}

TEST_CASE("closed forms reduce to the canonical pair", "[indices][normal]") {
  std::mt19937_64 engine(47);
  std::uniform_real_distribution<double> loc(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double m1 = loc(engine), s1 = scale(engine), m2 = loc(engine), s2 = scale(engine);
    CHECK(pi_normal(m1, s1, m2, s2) == Approx(pi_normal(0, 1, (m2 - m1) / s1, s2 / s1)).margin(1e-14));
    CHECK(gamma_normal(m1, s1, m2, s2) == Approx(gamma_normal(0, 1, (m2 - m1) / s1, s2 / s1)).margin(1e-14));
  }
}

TEST_CASE("closed forms agree with grid oracles", "[indices][oracle]") {
  std::mt19937_64 engine(53);
  std::uniform_real_distribution<double> loc(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  const Normal f(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double mu = loc(engine);
    const double sigma = scale(engine);
    const Normal g(mu, sigma);
    const double grid_pi = pi_population_oracle(f, g, -12.0, 12.0, 1e-4);
    CHECK(std::abs(pi_normal(0, 1, mu, sigma) - grid_pi) <= 1e-6);
    const double grid_gamma = gamma_population_oracle(f, g, 20000);
    CHECK(std::abs(gamma_normal(0, 1, mu, sigma) - grid_gamma) <= 2.0 / 20000);
    CHECK(pi_normal(0, 1, mu, sigma) <= gamma_normal(0, 1, mu, sigma) + 1e-9);
  }
}

TEST_CASE("population oracle sanity", "[indices][oracle]") {
  const Normal f(0.0, 1.0);
  CHECK(pi_population_oracle(f, f, -10, 10, 1e-3) == 0.0);
  CHECK(gamma_population_oracle(f, f, 1000) == 0.0);
  const Normal g(0.3, 0.7);
  const double full = pi_normal(0, 1, 0.3, 0.7);
  const auto roots = density_crossings(0.3, 0.7);
  // Pick the root where the difference is attained and exclude it.
  double argmax = roots.front();
  for (double r : roots) {
    if (g.cdf(r) - f.cdf(r) > g.cdf(argmax) - f.cdf(argmax)) argmax = r;
  }
  CHECK(pi_population_oracle(f, g, argmax + 0.5, argmax + 3.0, 1e-3) < full);
  const Normal h(0.337, 1.5);
  CHECK(gamma_population_oracle(f, h, 4000) + gamma_population_oracle(h, f, 4000) == Approx(1.0).margin(2.0 / 4000));
  CHECK_THROWS_AS(gamma_population_oracle(f, h, 999), DomainError);
}

TEST_CASE("quantile crossing of two normals", "[indices][normal]") {
  const auto crossing = normal_quantile_crossing(0.337, 1.5);
  CHECK(crossing.level == Approx(gamma_normal(0, 1, 0.337, 1.5)).margin(1e-12));
  CHECK(std_normal_quantile(crossing.level) == Approx(0.337 + 1.5 * std_normal_quantile(crossing.level)).margin(1e-9));
  CHECK_THROWS_AS(normal_quantile_crossing(0.2, 1.0), SingularityError);
}

TEST_CASE("empirical estimates are consistent at large samples", "[indices][stochastic]") {
  const double pi_true = pi_normal(0, 1, 0.337, 1.5);
  int good = 0;
  const int runs = 40;
  for (int run = 0; run < runs; ++run) {
    RngStream rng(59, run);
    const auto x = empirical_from(sample_normal(rng, 0.0, 1.0, 10000));
    const auto y = empirical_from(sample_normal(rng, 0.337, 1.5, 10000));
    good += std::abs(gamma_hat(x, y) - 0.25) <= 0.05 && std::abs(pi_empirical(x, y) - pi_true) <= 0.05;
  }
  CHECK(good >= 38);
}
