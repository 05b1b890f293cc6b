// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/parallel.hpp"
#include "dominance/random.hpp"

namespace dominance {

enum class ResamplingScheme { kNonparametric, kParametricNormal };

inline constexpr std::size_t kMinBootstrapReplicates = 50;
inline constexpr std::size_t kDefaultBootstrapReplicates = 200;

struct BootstrapOptions {
  std::size_t replicates = kDefaultBootstrapReplicates;
  ResamplingScheme scheme = ResamplingScheme::kNonparametric;
  // Range of the statistic; the bias-corrected value is clipped to it.
  double lower = 0.0;
  double upper = 1.0;
  unsigned threads = 1;
};

struct BootstrapResult {
  double raw_estimate = 0.0;
  double boot_mean = 0.0;
  double unclipped_corrected = 0.0;  // 2 raw - boot_mean
  double bias_corrected = 0.0;       // unclipped_corrected clipped to [lower, upper]
  double boot_se = 0.0;              // sd(replicates) * sqrt(nm / (n + m))
  std::size_t replicates = 0;
  std::vector<double> replicate_values;
};

// n draws with replacement from s, returned sorted. Indices are tallied and
// expanded in order, so no sort is needed.
inline EmpiricalDistribution resample(RngStream& rng, const EmpiricalDistribution& s) {
  const auto values = s.values();
  const std::size_t n = values.size();
  std::vector<std::uint32_t> counts(n, 0);
  for (std::size_t k = 0; k < n; ++k) ++counts[rng.below(n)];
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), counts[i], values[i]);
  return EmpiricalDistribution::from_sorted(std::move(out));
}

inline EmpiricalDistribution resample_parametric_normal(RngStream& rng, double mu_hat, double sigma_hat,
                                                        std::size_t n) {
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) {
    throw DomainError("parametric resample: sigma_hat must be positive");
  }
  if (n == 0) throw InputError("parametric resample: n must be at least 1");
  std::vector<double> draws(n);
  fill_normal(rng, mu_hat, sigma_hat, draws);
  std::sort(draws.begin(), draws.end());
  return EmpiricalDistribution::from_sorted(std::move(draws));
}

template <class Stat>
concept TwoSampleStatistic = std::invocable<Stat&, const EmpiricalDistribution&, const EmpiricalDistribution&> &&
    std::convertible_to<std::invoke_result_t<Stat&, const EmpiricalDistribution&, const EmpiricalDistribution&>,
                        double>;

// Bootstrap bias correction and standard error of a two-sample statistic.
// The two samples are resampled independently; replicate r consumes only
// rng.child(r), x first and then y, so the replicate list does not depend on
// the worker count. Aggregation runs in replicate order.
template <TwoSampleStatistic Stat>
BootstrapResult boot_stat(const RngStream& rng, const EmpiricalDistribution& x, const EmpiricalDistribution& y,
                          Stat&& stat, const BootstrapOptions& options = {}) {
  if (options.replicates < kMinBootstrapReplicates) {
    throw ConfigError("bootstrap needs at least " + std::to_string(kMinBootstrapReplicates) +
                      " replicates, got " + std::to_string(options.replicates));
  }
  double mu_x = 0.0;
  double sd_x = 0.0;
  double mu_y = 0.0;
  double sd_y = 0.0;
  if (options.scheme == ResamplingScheme::kParametricNormal) {
    mu_x = x.mean();
    sd_x = std::sqrt(x.variance_ml());
    mu_y = y.mean();
    sd_y = std::sqrt(y.variance_ml());
  }

  BootstrapResult result;
  result.replicates = options.replicates;
  result.raw_estimate = stat(x, y);
  result.replicate_values.assign(options.replicates, 0.0);

  parallel_for(options.replicates, options.threads, [&](std::size_t r) {
    RngStream stream = rng.child(r);
    if (options.scheme == ResamplingScheme::kNonparametric) {
      const auto xb = resample(stream, x);
      const auto yb = resample(stream, y);
      result.replicate_values[r] = stat(xb, yb);
    } else {
      const auto xb = resample_parametric_normal(stream, mu_x, sd_x, x.size());
      const auto yb = resample_parametric_normal(stream, mu_y, sd_y, y.size());
      result.replicate_values[r] = stat(xb, yb);
    }
  });

  const auto& reps = result.replicate_values;
  const double count = static_cast<double>(reps.size());
  const bool constant = std::all_of(reps.begin(), reps.end(), [&](double v) { return v == reps.front(); });
  double sd = 0.0;
  if (constant) {
    result.boot_mean = reps.front();
  } else {
    double sum = 0.0;
    for (double v : reps) sum += v;
    result.boot_mean = sum / count;
    double squares = 0.0;
    for (double v : reps) squares += (v - result.boot_mean) * (v - result.boot_mean);
    sd = std::sqrt(squares / (count - 1.0));
  }

  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  result.boot_se = sd * std::sqrt(n * m / (n + m));
  result.unclipped_corrected = 2.0 * result.raw_estimate - result.boot_mean;
  result.bias_corrected = std::clamp(result.unclipped_corrected, options.lower, options.upper);
  return result;
}

}  // namespace dominance
