// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/models.hpp"
#include "dominance/normal.hpp"

namespace dominance {

// The two deviation indices from F <=st G. Always 0 <= pi <= gamma <= 1.
struct DominanceIndices {
  double pi = 0.0;     // sup_x (G(x) - F(x))
  double gamma = 0.0;  // Lebesgue measure of {t : F^{-1}(t) > G^{-1}(t)}
};

// --------------------------------------------------------------------------
// Empirical estimators

// pi(F_n, G_m) = sup_x (G_m(x) - F_n(x)), the one-sided two-sample
// Kolmogorov-Smirnov statistic. Both step functions are right-continuous
// and jump only at sample points, so the supremum is attained at a pooled
// sample value (or is 0, the common value at -infinity). Computed in
// integer units of 1/(n m).
inline double pi_empirical(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  const auto n = static_cast<std::int64_t>(xs.size());
  const auto m = static_cast<std::int64_t>(ys.size());
  std::int64_t best = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < xs.size() || j < ys.size()) {
    const double v = (j == ys.size() || (i < xs.size() && xs[i] < ys[j])) ? xs[i] : ys[j];
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    best = std::max(best, static_cast<std::int64_t>(j) * n - static_cast<std::int64_t>(i) * m);
  }
  return static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
}

// Location of the supremum defining pi(F_n, G_m).
struct PiContact {
  double pi = 0.0;
  double x = 0.0;      // smallest pooled value attaining the supremum
  double level = 0.0;  // G_m(x), the estimated contact level; 0 when pi = 0
};

// Same supremum as pi_empirical, also reporting where it is attained. When
// pi(F_n, G_m) = 0 the supremum sits at -infinity (level 0).
inline PiContact pi_empirical_contact(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  const auto n = static_cast<std::int64_t>(xs.size());
  const auto m = static_cast<std::int64_t>(ys.size());
  std::int64_t best = 0;
  PiContact out;
  out.x = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < xs.size() || j < ys.size()) {
    const double v = (j == ys.size() || (i < xs.size() && xs[i] < ys[j])) ? xs[i] : ys[j];
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    const std::int64_t excess = static_cast<std::int64_t>(j) * n - static_cast<std::int64_t>(i) * m;
    if (excess > best) {
      best = excess;
      out.x = v;
      out.level = static_cast<double>(j) / static_cast<double>(m);
    }
  }
  out.pi = static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m));
  return out;
}

// psi_{n,m}(t) = 2 int_0^t (F_n^{-1} - G_m^{-1}) - (mean_x - mean_y) on the
// merged grid {i/n} U {j/m}. psi is affine between consecutive breakpoints.
struct PsiCurve {
  std::vector<double> breakpoints;  // ascending, from 0 to 1
  std::vector<double> values;       // psi at each breakpoint
  std::size_t star_index = 0;       // position of gamma_star in breakpoints
  double gamma_star = 0.0;          // smallest maximizer of |psi| over interior breakpoints
  double psi_at_star = 0.0;
  double gamma_hat = 0.0;           // gamma_star if psi(gamma_star) >= 0, else 1 - gamma_star
  bool degenerate = false;          // psi vanishes at every interior breakpoint; the endpoint 0 is used
};

// Relative tolerance under which two values of |psi| count as tied.
inline constexpr double kPsiTieTolerance = 1e-12;

inline PsiCurve gamma_empirical(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  const auto n = static_cast<std::int64_t>(xs.size());
  const auto m = static_cast<std::int64_t>(ys.size());
  const double nm = static_cast<double>(n) * static_cast<double>(m);

  PsiCurve curve;
  curve.breakpoints.reserve(xs.size() + ys.size() + 1);
  curve.values.reserve(xs.size() + ys.size() + 1);

  double psi = -(x.mean() - y.mean());
  double correction = 0.0;  // Neumaier compensation for the running integral
  curve.breakpoints.push_back(0.0);
  curve.values.push_back(psi);

  // Breakpoints in integer units of 1/(n m): x-grid at (ia+1) m, y-grid at (jb+1) n.
  std::int64_t ia = 0;
  std::int64_t jb = 0;
  std::int64_t previous = 0;
  while (ia < n && jb < m) {
    const std::int64_t next_x = (ia + 1) * m;
    const std::int64_t next_y = (jb + 1) * n;
    const std::int64_t next = std::min(next_x, next_y);
    const double increment = 2.0 * (static_cast<double>(next - previous) / nm) *
                             (xs[static_cast<std::size_t>(ia)] - ys[static_cast<std::size_t>(jb)]);
    const double t = psi + increment;
    if (std::abs(psi) >= std::abs(increment)) {
      correction += (psi - t) + increment;
    } else {
      correction += (increment - t) + psi;
    }
    psi = t;

    double breakpoint = 0.0;
    if (next == next_x) {
      breakpoint = static_cast<double>(ia + 1) / static_cast<double>(n);
      ++ia;
    } else {
      breakpoint = static_cast<double>(jb + 1) / static_cast<double>(m);
    }
    if (next == next_y) ++jb;
    curve.breakpoints.push_back(breakpoint);
    curve.values.push_back(psi + correction);
    previous = next;
  }

  // The maximizer is sought over the open interval (0,1): interior
  // breakpoints only. psi(0) = -psi(1) always tie and carry no crossing.
  const std::size_t last = curve.values.size() - 1;
  double max_abs = 0.0;
  for (std::size_t k = 1; k < last; ++k) max_abs = std::max(max_abs, std::abs(curve.values[k]));
  if (max_abs == 0.0) {
    curve.degenerate = true;
    curve.star_index = 0;
    curve.gamma_star = 0.0;
    curve.psi_at_star = curve.values[0];
    curve.gamma_hat = curve.values[0] >= 0.0 ? 0.0 : 1.0;
    return curve;
  }
  const double threshold = max_abs * (1.0 - kPsiTieTolerance);
  for (std::size_t k = 1; k < last; ++k) {
    if (std::abs(curve.values[k]) >= threshold) {
      curve.star_index = k;
      break;
    }
  }
  curve.gamma_star = curve.breakpoints[curve.star_index];
  curve.psi_at_star = curve.values[curve.star_index];
  curve.gamma_hat = curve.psi_at_star >= 0.0 ? curve.gamma_star : 1.0 - curve.gamma_star;
  return curve;
}

inline double gamma_hat(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  return gamma_empirical(x, y).gamma_hat;
}

// l(F_n^{-1} > G_m^{-1}) read directly off the quantile coupling. This is
// gamma(F_n, G_m) without the single-crossing assumption behind gamma_hat.
inline double crossing_mass_empirical(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  const auto n = static_cast<std::int64_t>(xs.size());
  const auto m = static_cast<std::int64_t>(ys.size());
  std::int64_t ia = 0;
  std::int64_t jb = 0;
  std::int64_t previous = 0;
  std::int64_t mass = 0;
  while (ia < n && jb < m) {
    const std::int64_t next = std::min((ia + 1) * m, (jb + 1) * n);
    if (xs[static_cast<std::size_t>(ia)] > ys[static_cast<std::size_t>(jb)]) mass += next - previous;
    if (next == (ia + 1) * m) ++ia;
    if (next == (jb + 1) * n) ++jb;
    previous = next;
  }
  return static_cast<double>(mass) / (static_cast<double>(n) * static_cast<double>(m));
}

// --------------------------------------------------------------------------
// Normal model closed forms

// Both indices are invariant under a common affine change of variable, so
// (N(mu1, s1^2), N(mu2, s2^2)) reduces to (N(0,1), N(mu, sigma^2)) with
// mu = (mu2 - mu1)/s1 and sigma = s2/s1.
struct CanonicalPair {
  double mu;
  double sigma;
};

inline CanonicalPair canonical_pair(double mu1, double sigma1, double mu2, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2)) {
    throw DomainError("normal index: scales must be positive and finite");
  }
  if (!std::isfinite(mu1) || !std::isfinite(mu2)) throw DomainError("normal index: locations must be finite");
  return {(mu2 - mu1) / sigma1, sigma2 / sigma1};
}

namespace detail {

// Phi(b) - Phi(a), evaluated on whichever tail keeps precision.
inline double normal_mass_between(double a, double b) noexcept {
  if (a > 0.0 && b > 0.0) return std_normal_ccdf(a) - std_normal_ccdf(b);
  return std_normal_cdf(b) - std_normal_cdf(a);
}

}  // namespace detail

// Roots of the density-crossing condition phi(x) = phi((x - mu)/sigma)/sigma,
// i.e. (sigma^2 - 1) x^2 + 2 mu x - (mu^2 + 2 sigma^2 log sigma) = 0, for
// sigma != 1. The discriminant mu^2 sigma^2 + 2 sigma^2 (sigma^2 - 1) log sigma
// (quarter of the usual one) is never negative.
inline std::vector<double> density_crossings(double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("density_crossings: sigma must be positive");
  const double a = sigma * sigma - 1.0;
  const double half_b = mu;
  const double c = -(mu * mu + 2.0 * sigma * sigma * std::log(sigma));
  if (a == 0.0) {
    if (half_b == 0.0) return {};
    return {-c / (2.0 * half_b)};
  }
  const double quarter_disc = std::max(0.0, half_b * half_b - a * c);
  const double root = std::sqrt(quarter_disc);
  const double q = -(half_b + std::copysign(root, half_b));
  if (q == 0.0) return {0.0};
  return {q / a, c / q};
}

// pi(N(0,1), N(mu, sigma^2)) in canonical coordinates.
inline double pi_normal_canonical(double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("pi_normal: sigma must be positive");
  if (sigma == 1.0) {
    // Densities cross once, at mu/2.
    return std::clamp(detail::normal_mass_between(mu / 2.0, -mu / 2.0), 0.0, 1.0);
  }
  double best = 0.0;
  for (double x : density_crossings(mu, sigma)) {
    if (!std::isfinite(x)) continue;
    best = std::max(best, detail::normal_mass_between(x, (x - mu) / sigma));
  }
  return std::clamp(best, 0.0, 1.0);
}

inline double pi_normal(double mu1, double sigma1, double mu2, double sigma2) {
  const auto [mu, sigma] = canonical_pair(mu1, sigma1, mu2, sigma2);
  return pi_normal_canonical(mu, sigma);
}

// gamma(N(0,1), N(mu, sigma^2)) = 1 - Phi(mu / |sigma - 1|) for sigma != 1;
// 0 or 1 when sigma = 1 according to the sign of mu.
inline double gamma_normal_canonical(double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gamma_normal: sigma must be positive");
  if (sigma == 1.0) return mu >= 0.0 ? 0.0 : 1.0;
  return std_normal_ccdf(mu / std::abs(sigma - 1.0));
}

inline double gamma_normal(double mu1, double sigma1, double mu2, double sigma2) {
  const auto [mu, sigma] = canonical_pair(mu1, sigma1, mu2, sigma2);
  return gamma_normal_canonical(mu, sigma);
}

inline DominanceIndices normal_indices(double mu1, double sigma1, double mu2, double sigma2) {
  return {pi_normal(mu1, sigma1, mu2, sigma2), gamma_normal(mu1, sigma1, mu2, sigma2)};
}

// Quantile level at which N(0,1) and N(mu, sigma^2) quantiles cross, and the
// crossing abscissa. Requires sigma != 1.
struct QuantileCrossing {
  double x;
  double level;
};

inline QuantileCrossing normal_quantile_crossing(double mu, double sigma) {
  if (sigma == 1.0) throw SingularityError("normal quantiles never cross when scales agree");
  const double z = mu / (1.0 - sigma);
  return {z, std_normal_cdf(z)};
}

// --------------------------------------------------------------------------
// Brute-force population oracles

// max over {lo, lo + step, ..., hi} of g.cdf - f.cdf, floored at 0.
template <ContinuousModel F, ContinuousModel G>
double pi_population_oracle(const F& f, const G& g, double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0.0)) throw DomainError("pi_population_oracle: need lo < hi and step > 0");
  double best = 0.0;
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step));
  for (std::int64_t k = 0; k <= count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    best = std::max(best, g.cdf(x) - f.cdf(x));
  }
  best = std::max(best, g.cdf(hi) - f.cdf(hi));
  return best;
}

// Midpoint-rule estimate of l(f^{-1} > g^{-1}) on `grid` cells.
template <ContinuousModel F, ContinuousModel G>
double gamma_population_oracle(const F& f, const G& g, std::size_t grid) {
  if (grid < 1000) throw DomainError("gamma_population_oracle: grid must be at least 1000");
  std::size_t above = 0;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double t = (static_cast<double>(k) - 0.5) / static_cast<double>(grid);
    if (f.quantile(t) > g.quantile(t)) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(grid);
}

}  // namespace dominance
