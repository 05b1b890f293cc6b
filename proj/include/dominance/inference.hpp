// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dominance/bootstrap.hpp"
#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/models.hpp"
#include "dominance/normal.hpp"
#include "dominance/random.hpp"

namespace dominance {

enum class IndexKind { kPi, kGamma };
enum class TestMethod { kLeastFavorable, kBootstrap, kPluginNormal };

inline const char* to_string(IndexKind kind) noexcept { return kind == IndexKind::kPi ? "pi" : "gamma"; }

inline const char* to_string(TestMethod method) noexcept {
  switch (method) {
    case TestMethod::kLeastFavorable:
      return "lf";
    case TestMethod::kBootstrap:
      return "boot";
    case TestMethod::kPluginNormal:
      return "plugin";
  }
  return "?";
}

// Floor on the standard deviation used by the rejection rule, for
// bootstrap replicates that happen to be constant.
inline constexpr double kSigmaFloor = 1e-6;

// Nonparametric flag: sample variances within 5% of each other.
inline constexpr double kNearEqualVarianceRatio = 0.05;

// Plug-in warning: fitted scales within 0.1% of each other.
inline constexpr double kPluginScaleTolerance = 1e-3;

// H0: index(F, G) >= delta0 against Ha: index(F, G) < delta0.
struct TestSpec {
  IndexKind index = IndexKind::kPi;
  double delta0 = 0.05;
  double alpha = 0.05;
  TestMethod method = TestMethod::kBootstrap;
  std::size_t replicates = kDefaultBootstrapReplicates;
  // Non-default: bias-correct gamma_hat the same way as the pi estimate.
  bool bias_correct_gamma = false;
  unsigned threads = 1;

  void validate() const {
    if (!(delta0 > 0.0 && delta0 < 1.0)) throw ConfigError("delta0 must lie in (0,1)");
    if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
    if (index == IndexKind::kGamma && method == TestMethod::kLeastFavorable) {
      throw ConfigError("the least-favorable test is only defined for the pi index");
    }
    if (method != TestMethod::kLeastFavorable && replicates < kMinBootstrapReplicates) {
      throw ConfigError("bootstrap methods need at least 50 replicates");
    }
  }
};

// Point estimate and scale feeding the rejection rule. For the
// least-favorable test the scale depends on delta0 and is filled in by
// decide().
struct Estimate {
  double raw = 0.0;
  double used = 0.0;
  std::optional<double> sigma;
  std::optional<double> bootstrap_se;
  std::optional<double> contact_level;  // pi bootstrap test only
  std::size_t n = 0;
  std::size_t m = 0;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

struct TestReport {
  IndexKind index = IndexKind::kPi;
  TestMethod method = TestMethod::kBootstrap;
  double delta0 = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t replicates = 0;  // 0 for the least-favorable test

  double estimate_raw = 0.0;
  double estimate_used = 0.0;
  double sigma_used = 0.0;
  double statistic = 0.0;  // sqrt(nm/(n+m)) (estimate_used - delta0)
  double critical = 0.0;   // sigma_used * Phi^{-1}(alpha)
  bool reject = false;     // statistic < critical
  double upper_bound = 0.0;
  double lambda_nm = 0.0;  // n / (n + m)
  std::optional<double> bootstrap_se;
  std::optional<double> contact_level;
  bool degeneracy_flag = false;
  std::vector<std::string> warnings;
};

inline double sqrt_effective_size(std::size_t n, std::size_t m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return std::sqrt(dn * dm / (dn + dm));
}

// sqrt(1/4 - pi0^2 lambda (1 - lambda)): the least-favorable normal scale
// that bounds the alpha-quantiles of the limit law from below.
inline double least_favorable_sd(double pi0, double lambda) {
  if (!(pi0 > 0.0 && pi0 < 1.0)) throw DomainError("least_favorable_sd: pi0 must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("least_favorable_sd: lambda must lie in (0,1)");
  if (lambda * pi0 > 0.5 || (1.0 - lambda) * pi0 > 0.5) {
    throw DomainError("least_favorable_sd: requires lambda*pi0 <= 1/2 and (1-lambda)*pi0 <= 1/2");
  }
  return std::sqrt(0.25 - pi0 * pi0 * lambda * (1.0 - lambda));
}

// Variance of sqrt(lambda) B1(t) - sqrt(1 - lambda) B2(t - pi) for
// independent Brownian bridges: the limit law of the scaled statistic when
// the contact set is the single level t. Its maximum over t is the
// least-favorable variance 1/4 - pi^2 lambda (1 - lambda).
inline double contact_variance(double level, double pi, double lambda) {
  const double shifted = level - pi;
  return lambda * level * (1.0 - level) + (1.0 - lambda) * shifted * (1.0 - shifted);
}

// Applies the one-sided rejection rule and the dual upper confidence bound.
inline TestReport decide(const Estimate& estimate, const TestSpec& spec) {
  TestReport report;
  report.index = spec.index;
  report.method = spec.method;
  report.delta0 = spec.delta0;
  report.alpha = spec.alpha;
  report.n = estimate.n;
  report.m = estimate.m;
  report.replicates = spec.method == TestMethod::kLeastFavorable ? 0 : spec.replicates;
  report.estimate_raw = estimate.raw;
  report.estimate_used = estimate.used;
  report.lambda_nm = static_cast<double>(estimate.n) / static_cast<double>(estimate.n + estimate.m);
  report.sigma_used = estimate.sigma ? *estimate.sigma : least_favorable_sd(spec.delta0, report.lambda_nm);

  const double scale = sqrt_effective_size(estimate.n, estimate.m);
  const double z = std_normal_quantile(spec.alpha);
  report.statistic = scale * (estimate.used - spec.delta0);
  report.critical = report.sigma_used * z;
  report.reject = report.statistic < report.critical;
  report.upper_bound = std::min(1.0, estimate.used - report.sigma_used * z / scale);
  report.bootstrap_se = estimate.bootstrap_se;
  report.contact_level = estimate.contact_level;
  report.degeneracy_flag = estimate.degenerate;
  report.warnings = estimate.warnings;
  return report;
}

namespace detail {

inline void require_samples(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  if (x.size() == 0 || y.size() == 0) throw InputError("both samples must be nonempty");
}

inline bool near_equal_variances(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const double vx = x.variance_ml();
  const double vy = y.variance_ml();
  return std::abs(vx - vy) < kNearEqualVarianceRatio * std::max(vx, vy);
}

inline BootstrapOptions boot_options(const TestSpec& spec, ResamplingScheme scheme) {
  BootstrapOptions options;
  options.replicates = spec.replicates;
  options.scheme = scheme;
  options.threads = spec.threads;
  return options;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Estimation step of each procedure. Each is independent of delta0 and
// alpha, so one estimate can be decided against several nulls.

inline Estimate estimate_pi_least_favorable(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  detail::require_samples(x, y);
  Estimate e;
  e.n = x.size();
  e.m = y.size();
  e.raw = pi_empirical(x, y);
  e.used = e.raw;
  return e;
}

// Bootstrap bias-corrected pi with the limit-law scale estimated at the
// observed contact point: sigma^2 = contact_variance(G_m(x_hat), pi_hat,
// lambda_nm), where x_hat attains sup(G_m - F_n). The bootstrap standard
// error is kept for reference.
inline Estimate estimate_pi_bootstrap(const RngStream& rng, const EmpiricalDistribution& x,
                                      const EmpiricalDistribution& y, const TestSpec& spec) {
  detail::require_samples(x, y);
  const auto boot = boot_stat(rng, x, y, pi_empirical, detail::boot_options(spec, ResamplingScheme::kNonparametric));
  const auto contact = pi_empirical_contact(x, y);
  Estimate e;
  e.n = x.size();
  e.m = y.size();
  e.raw = boot.raw_estimate;
  e.used = boot.bias_corrected;
  e.bootstrap_se = boot.boot_se;
  e.contact_level = contact.level;
  const double lambda = static_cast<double>(e.n) / static_cast<double>(e.n + e.m);
  e.sigma = std::max(std::sqrt(std::max(0.0, contact_variance(contact.level, contact.pi, lambda))), kSigmaFloor);
  return e;
}

inline Estimate estimate_gamma_bootstrap(const RngStream& rng, const EmpiricalDistribution& x,
                                         const EmpiricalDistribution& y, const TestSpec& spec) {
  detail::require_samples(x, y);
  const auto curve = gamma_empirical(x, y);
  const auto boot = boot_stat(
      rng, x, y, [](const EmpiricalDistribution& a, const EmpiricalDistribution& b) { return gamma_hat(a, b); },
      detail::boot_options(spec, ResamplingScheme::kNonparametric));
  Estimate e;
  e.n = x.size();
  e.m = y.size();
  e.raw = curve.gamma_hat;
  e.used = spec.bias_correct_gamma ? boot.bias_corrected : curve.gamma_hat;
  e.bootstrap_se = boot.boot_se;
  e.sigma = std::max(boot.boot_se, kSigmaFloor);
  e.degenerate = curve.degenerate || detail::near_equal_variances(x, y);
  if (curve.degenerate) e.warnings.emplace_back("psi curve is identically zero; gamma_hat set to 0");
  if (detail::near_equal_variances(x, y)) {
    e.warnings.emplace_back("sample variances differ by less than 5%; the gamma test is unstable here");
  }
  return e;
}

struct NormalFit {
  double mean;
  double sd;  // maximum likelihood (divisor n)
};

inline NormalFit fit_normal(const EmpiricalDistribution& s) {
  const double variance = s.variance_ml();
  if (!(variance > 0.0)) throw InputError("plug-in normal fit: sample variance is zero");
  return {s.mean(), std::sqrt(variance)};
}

inline double plugin_index(IndexKind kind, const NormalFit& fx, const NormalFit& fy) {
  return kind == IndexKind::kPi ? pi_normal(fx.mean, fx.sd, fy.mean, fy.sd)
                                : gamma_normal(fx.mean, fx.sd, fy.mean, fy.sd);
}

inline Estimate estimate_plugin_normal(const RngStream& rng, const EmpiricalDistribution& x,
                                       const EmpiricalDistribution& y, const TestSpec& spec) {
  detail::require_samples(x, y);
  const NormalFit fx = fit_normal(x);
  const NormalFit fy = fit_normal(y);
  const IndexKind kind = spec.index;
  const auto boot = boot_stat(
      rng, x, y,
      [kind](const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
        return plugin_index(kind, fit_normal(a), fit_normal(b));
      },
      detail::boot_options(spec, ResamplingScheme::kParametricNormal));
  Estimate e;
  e.n = x.size();
  e.m = y.size();
  e.raw = boot.raw_estimate;
  const bool correct = kind == IndexKind::kPi || spec.bias_correct_gamma;
  e.used = correct ? boot.bias_corrected : boot.raw_estimate;
  e.bootstrap_se = boot.boot_se;
  e.sigma = std::max(boot.boot_se, kSigmaFloor);
  if (kind == IndexKind::kGamma && std::abs(fx.sd - fy.sd) / fx.sd < kPluginScaleTolerance) {
    e.degenerate = true;
    e.warnings.emplace_back("fitted scales agree to within 0.1%; the plug-in gamma is not asymptotically normal here");
  }
  return e;
}

// Dispatches on spec.method and spec.index.
inline Estimate estimate(const RngStream& rng, const EmpiricalDistribution& x, const EmpiricalDistribution& y,
                         const TestSpec& spec) {
  spec.validate();
  switch (spec.method) {
    case TestMethod::kLeastFavorable:
      return estimate_pi_least_favorable(x, y);
    case TestMethod::kBootstrap:
      return spec.index == IndexKind::kPi ? estimate_pi_bootstrap(rng, x, y, spec)
                                          : estimate_gamma_bootstrap(rng, x, y, spec);
    case TestMethod::kPluginNormal:
      return estimate_plugin_normal(rng, x, y, spec);
  }
  throw ConfigError("unknown test method");
}

// --------------------------------------------------------------------------
// The test procedures.

// Conservative test with the least-favorable scale sigma_bar_{pi0}(lambda_nm).
inline TestReport test_pi_least_favorable(const EmpiricalDistribution& x, const EmpiricalDistribution& y,
                                          TestSpec spec) {
  spec.index = IndexKind::kPi;
  spec.method = TestMethod::kLeastFavorable;
  spec.validate();
  return decide(estimate_pi_least_favorable(x, y), spec);
}

// Bias-corrected estimate with the contact-point scale; the upper bound is U.
inline TestReport test_pi_bootstrap(const RngStream& rng, const EmpiricalDistribution& x,
                                    const EmpiricalDistribution& y, TestSpec spec) {
  spec.index = IndexKind::kPi;
  spec.method = TestMethod::kBootstrap;
  spec.validate();
  return decide(estimate_pi_bootstrap(rng, x, y, spec), spec);
}

// gamma_hat with bootstrap standard error; the upper bound is V.
inline TestReport test_gamma(const RngStream& rng, const EmpiricalDistribution& x, const EmpiricalDistribution& y,
                             TestSpec spec) {
  spec.index = IndexKind::kGamma;
  spec.method = TestMethod::kBootstrap;
  spec.validate();
  return decide(estimate_gamma_bootstrap(rng, x, y, spec), spec);
}

inline TestReport test_plugin_normal(const RngStream& rng, const EmpiricalDistribution& x,
                                     const EmpiricalDistribution& y, TestSpec spec) {
  spec.method = TestMethod::kPluginNormal;
  spec.validate();
  return decide(estimate_plugin_normal(rng, x, y, spec), spec);
}

inline TestReport run_test(const RngStream& rng, const EmpiricalDistribution& x, const EmpiricalDistribution& y,
                           const TestSpec& spec) {
  return decide(estimate(rng, x, y, spec), spec);
}

// Asymptotic standard deviation of sqrt(nm/(n+m)) (gamma_hat - gamma):
//   gamma*(1 - gamma*) [(1 - lambda) g(x*)^2 + lambda f(x*)^2] / (g(x*) - f(x*))^2
// where x* is the crossing point of the distribution functions.
template <ContinuousModel F, ContinuousModel G>
double gamma_asymptotic_sd(const F& f, const G& g, double crossing_x, double gamma_star, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("gamma_asymptotic_sd: lambda must lie in (0,1)");
  if (!(gamma_star >= 0.0 && gamma_star <= 1.0)) throw DomainError("gamma_asymptotic_sd: gamma_star must lie in [0,1]");
  const double fx = f.density(crossing_x);
  const double gx = g.density(crossing_x);
  if (fx == gx) {
    throw SingularityError("gamma_asymptotic_sd: densities coincide at the crossing point");
  }
  const double variance =
      gamma_star * (1.0 - gamma_star) * ((1.0 - lambda) * gx * gx + lambda * fx * fx) / ((gx - fx) * (gx - fx));
  return std::sqrt(variance);
}

}  // namespace dominance
