// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dominance/errors.hpp"

namespace dominance {

namespace detail {

// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double correction = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      correction += (sum - t) + v;
    } else {
      correction += (v - t) + sum;
    }
    sum = t;
  }
  return sum + correction;
}

}  // namespace detail

// The sample distribution function of a finite sample: a sorted copy of the
// data with right-continuous step CDF and left-continuous quantile
// F_n^{-1}(t) = min{x : t <= F_n(x)} = values[ceil(t n) - 1].
class EmpiricalDistribution {
 public:
  // Takes ownership of already sorted, finite values. Use empirical_from()
  // for arbitrary input.
  static EmpiricalDistribution from_sorted(std::vector<double> sorted) {
    if (sorted.empty()) throw InputError("empirical distribution needs at least one value");
    EmpiricalDistribution out;
    out.values_ = std::move(sorted);
    out.mean_ = detail::compensated_sum(out.values_) / static_cast<double>(out.values_.size());
    return out;
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double mean() const noexcept { return mean_; }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  // Maximum-likelihood variance (divisor n).
  double variance_ml() const noexcept {
    double sum = 0.0;
    for (double v : values_) sum += (v - mean_) * (v - mean_);
    return sum / static_cast<double>(values_.size());
  }

  // Number of observations <= x.
  std::size_t count_le(double x) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(values_.begin(), values_.end(), x) - values_.begin());
  }

  // Number of observations < x.
  std::size_t count_lt(double x) const noexcept {
    return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) - values_.begin());
  }

  double cdf(double x) const noexcept {
    return static_cast<double>(count_le(x)) / static_cast<double>(values_.size());
  }

  // Order statistic of rank ceil(t n), 1-based; t = 0 maps to the minimum.
  double quantile(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("empirical quantile: t must lie in [0,1]");
    const double n = static_cast<double>(values_.size());
    auto rank = static_cast<std::size_t>(std::ceil(t * n));
    // t * n rounds, so settle on the smallest k with t <= k/n as computed.
    while (rank > 1 && static_cast<double>(rank - 1) / n >= t) --rank;
    while (rank < values_.size() && static_cast<double>(rank) / n < t) ++rank;
    if (rank == 0) rank = 1;
    if (rank > values_.size()) rank = values_.size();
    return values_[rank - 1];
  }

  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;

 private:
  EmpiricalDistribution() = default;

  std::vector<double> values_;
  double mean_ = 0.0;
};

// Builds the sample distribution function of `values`: sorted copy, ties
// kept. Requires at least two finite values.
inline EmpiricalDistribution empirical_from(std::span<const double> values) {
  if (values.size() < 2) {
    throw InputError("a sample needs at least 2 values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InputError("non-finite sample value at position " + std::to_string(i));
    }
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return EmpiricalDistribution::from_sorted(std::move(sorted));
}

inline EmpiricalDistribution empirical_from(std::initializer_list<double> values) {
  return empirical_from(std::span<const double>(values.begin(), values.size()));
}

}  // namespace dominance
