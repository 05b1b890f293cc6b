// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "dominance/bootstrap.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/inference.hpp"
#include "dominance/models.hpp"
#include "dominance/simulation.hpp"
#include "dominance/random.hpp"

using namespace dominance;
using Catch::Approx;

namespace {

EmpiricalDistribution normal_sample(std::uint64_t seed, double mu, double sigma, std::size_t n) {
  RngStream rng(seed, 0);
  return empirical_from(sample_normal(rng, mu, sigma, n));
}

}  // namespace

TEST_CASE("resample basics", "[bootstrap]") {
  RngStream rng(1, 0);
  const auto flat = empirical_from({2.5, 2.5, 2.5});
  CHECK(resample(rng, flat) == flat);

  std::vector<double> ramp(100);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  const auto base = EmpiricalDistribution::from_sorted(ramp);
  RngStream a(3, 7);
  RngStream b(3, 7);
  CHECK(resample(a, base) == resample(b, base));

  double total = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = resample(rng, base);
    REQUIRE(r.size() == 100);
    REQUIRE(std::is_sorted(r.values().begin(), r.values().end()));
    total += r.mean();
  }
  CHECK(std::abs(total / 1000.0 - 49.5) <= 0.6);
}

TEST_CASE("parametric resample", "[bootstrap]") {
  RngStream rng(5, 0);
  const auto one = resample_parametric_normal(rng, 1.0, 2.0, 1);
  CHECK(one.size() == 1);
  const auto big = resample_parametric_normal(rng, 3.0, 0.5, 100000);
  CHECK(big.mean() == Approx(3.0).margin(0.01));
  CHECK(std::sqrt(big.variance_ml()) == Approx(0.5).margin(0.01));
  CHECK_THROWS_AS(resample_parametric_normal(rng, 0.0, 0.0, 5), DomainError);
  CHECK_THROWS_AS(resample_parametric_normal(rng, 0.0, -2.0, 5), DomainError);
}

TEST_CASE("boot_stat requires enough replicates", "[bootstrap]") {
  const auto x = normal_sample(1, 0, 1, 20);
  BootstrapOptions options;
  options.replicates = 49;
  CHECK_THROWS_AS(boot_stat(RngStream(1, 0), x, x, pi_empirical, options), ConfigError);
  options.replicates = 50;
  CHECK_NOTHROW(boot_stat(RngStream(1, 0), x, x, pi_empirical, options));
}

TEST_CASE("constant statistic", "[bootstrap]") {
  const auto x = normal_sample(2, 0, 1, 30);
  const auto result = boot_stat(RngStream(2, 0), x, x, [](const auto&, const auto&) { return 0.3; });
  CHECK(result.raw_estimate == 0.3);
  CHECK(result.bias_corrected == 0.3);
  CHECK(result.boot_se == 0.0);
}

TEST_CASE("KS bias at identical samples", "[bootstrap]") {
  const auto x = normal_sample(3, 0, 1, 100);
  const auto result = boot_stat(RngStream(3, 1), x, x, pi_empirical);
  CHECK(result.raw_estimate == 0.0);
  CHECK(result.boot_mean > 0.0);
  CHECK(result.bias_corrected == 0.0);
  CHECK(result.unclipped_corrected < 0.0);
}

TEST_CASE("bias-correction identity and se scaling", "[bootstrap]") {
  const auto x = normal_sample(4, 0, 1, 60);
  const auto y = normal_sample(5, 0.2, 1.4, 90);
  BootstrapOptions options;
  options.replicates = 120;
  const auto result = boot_stat(RngStream(4, 0), x, y, pi_empirical, options);
  CHECK(result.unclipped_corrected + result.boot_mean == 2.0 * result.raw_estimate);
  CHECK(result.bias_corrected == std::clamp(result.unclipped_corrected, 0.0, 1.0));
  const auto& reps = result.replicate_values;
  const double mean = std::accumulate(reps.begin(), reps.end(), 0.0) / reps.size();
  double ss = 0.0;
  for (double v : reps) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (reps.size() - 1));
  CHECK(result.boot_mean == Approx(mean).epsilon(1e-12));
  CHECK(result.boot_se == Approx(sd * std::sqrt(60.0 * 90.0 / 150.0)).epsilon(1e-12));
  CHECK(result.boot_se > 0.0);
}

TEST_CASE("replicates do not depend on the thread count", "[bootstrap][determinism]") {
  const auto x = normal_sample(6, 0, 1, 80);
  const auto y = normal_sample(7, 0.1, 0.8, 70);
  for (auto scheme : {ResamplingScheme::kNonparametric, ResamplingScheme::kParametricNormal}) {
    BootstrapOptions serial;
    serial.scheme = scheme;
    serial.threads = 1;
    BootstrapOptions parallel = serial;
    parallel.threads = 8;
    const auto a = boot_stat(RngStream(8, 2), x, y, gamma_hat, serial);
    const auto b = boot_stat(RngStream(8, 2), x, y, gamma_hat, parallel);
    CHECK(a.replicate_values == b.replicate_values);
    CHECK(a.boot_se == b.boot_se);
    CHECK(a.bias_corrected == b.bias_corrected);
  }
}

// At (0.337, 1.5) the contact level sits in the lower tail, so the
// asymptotic sd of the scaled statistic is about 0.275, barely above half
// the least-favorable bound (0.2498). Roughly a quarter of the runs land
// below the factor-2 band; the check is reported but not enforced.
TEST_CASE("bootstrap se of pi within a factor 2 of the least-favorable bound", "[bootstrap][stochastic][!mayfail]") {
  const double pi = pi_normal(0, 1, 0.337, 1.5);
  const double bound = std::sqrt(0.25 - pi * pi / 4.0);
  int within = 0;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    RngStream rng(9, run);
    const auto x = empirical_from(sample_normal(rng, 0.0, 1.0, 1000));
    const auto y = empirical_from(sample_normal(rng, 0.337, 1.5, 1000));
    const auto result = boot_stat(rng.child(99), x, y, pi_empirical);
    within += result.boot_se >= bound / 2.0 && result.boot_se <= bound * 2.0;
  }
  CHECK(within >= 90);
}

TEST_CASE("bootstrap se of pi tracks the contact-point sd", "[bootstrap][stochastic]") {
  const Normal f(0.0, 1.0);
  const Normal g(0.337, 1.5);
  const auto contact = contact_set(f, g, 100000);
  const double level = contact.levels[contact.levels.size() / 2];
  const double target = std::sqrt(contact_variance(level, contact.pi, 0.5));
  int close = 0;
  const int runs = 40;
  for (int run = 0; run < runs; ++run) {
    RngStream rng(9, run);
    const auto x = empirical_from(sample_normal(rng, 0.0, 1.0, 1000));
    const auto y = empirical_from(sample_normal(rng, 0.337, 1.5, 1000));
    const auto result = boot_stat(rng.child(99), x, y, pi_empirical);
    close += std::abs(result.boot_se / target - 1.0) <= 0.25;
  }
  CHECK(close >= 36);
}
