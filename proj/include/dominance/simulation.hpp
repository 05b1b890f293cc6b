// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/inference.hpp"
#include "dominance/models.hpp"
#include "dominance/parallel.hpp"
#include "dominance/random.hpp"

namespace dominance {

// --------------------------------------------------------------------------
// Monte Carlo rejection rates. F = N(0,1), G = N(mu, sigma^2).

struct SimulationCell {
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t n = 100;
  std::size_t m = 100;
  IndexKind index = IndexKind::kPi;
  double delta0 = 0.05;
  double alpha = 0.05;
  TestMethod method = TestMethod::kBootstrap;
  std::size_t replicates = kDefaultBootstrapReplicates;  // bootstrap B
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  bool bias_correct_gamma = false;

  TestSpec test_spec(unsigned threads = 1) const {
    TestSpec spec;
    spec.index = index;
    spec.delta0 = delta0;
    spec.alpha = alpha;
    spec.method = method;
    spec.replicates = replicates;
    spec.bias_correct_gamma = bias_correct_gamma;
    spec.threads = threads;
    return spec;
  }

  void validate() const {
    if (reps < 1) throw ConfigError("reps must be at least 1");
    if (n < 2 || m < 2) throw ConfigError("sample sizes must be at least 2");
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
      throw ConfigError("mu must be finite and sigma positive");
    }
    test_spec().validate();
  }
};

struct CellOutcome {
  SimulationCell cell;
  bool ok = false;
  std::string error;
  std::size_t rejections = 0;
  double rate = 0.0;
  double mc_se = 0.0;  // sqrt(rate (1 - rate) / reps)
  double seconds = 0.0;
};

namespace detail {

// Everything that determines the simulated data and the estimates; cells
// that differ only in delta0 or alpha share one set of replications.
inline auto design_key(const SimulationCell& c) {
  return std::make_tuple(c.mu, c.sigma, c.n, c.m, static_cast<int>(c.index), static_cast<int>(c.method),
                         c.replicates, c.reps, c.seed, c.bias_correct_gamma);
}

// Replication r draws its data from RngStream(seed, r).child(0) and runs its
// bootstrap on RngStream(seed, r).child(1).
inline std::vector<Estimate> simulate_estimates(const SimulationCell& design, unsigned threads) {
  const TestSpec spec = design.test_spec(1);
  const Normal reference(0.0, 1.0);
  const Normal alternative(design.mu, design.sigma);
  std::vector<Estimate> estimates(design.reps);
  parallel_for(design.reps, threads, [&](std::size_t r) {
    const RngStream replication(design.seed, r);
    RngStream data = replication.child(0);
    std::vector<double> xs(design.n);
    std::vector<double> ys(design.m);
    for (double& v : xs) v = reference.draw(data);
    for (double& v : ys) v = alternative.draw(data);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const auto x = EmpiricalDistribution::from_sorted(std::move(xs));
    const auto y = EmpiricalDistribution::from_sorted(std::move(ys));
    estimates[r] = estimate(replication.child(1), x, y, spec);
  });
  return estimates;
}

inline void tally(CellOutcome& outcome, const std::vector<Estimate>& estimates) {
  const TestSpec spec = outcome.cell.test_spec();
  std::size_t rejections = 0;
  for (const auto& e : estimates) {
    if (decide(e, spec).reject) ++rejections;
  }
  outcome.rejections = rejections;
  outcome.rate = static_cast<double>(rejections) / static_cast<double>(estimates.size());
  outcome.mc_se = std::sqrt(outcome.rate * (1.0 - outcome.rate) / static_cast<double>(estimates.size()));
  outcome.ok = true;
}

}  // namespace detail

// Runs every cell. Cells sharing a design (all parameters except delta0
// and alpha) are evaluated on the same replications, which is exactly what
// running them one at a time with the same seed would give. A failing cell
// is reported with ok = false and the run continues. Output order follows
// input order; `seconds` is the wall time of the shared replications.
inline std::vector<CellOutcome> run_table(const std::vector<SimulationCell>& cells, unsigned threads = 1) {
  std::vector<CellOutcome> outcomes(cells.size());
  std::map<decltype(detail::design_key(SimulationCell{})), std::vector<std::size_t>> groups;
  std::vector<decltype(detail::design_key(SimulationCell{}))> order;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    outcomes[i].cell = cells[i];
    const auto key = detail::design_key(cells[i]);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(i);
  }

  for (const auto& key : order) {
    const auto& members = groups[key];
    std::vector<std::size_t> valid;
    for (std::size_t i : members) {
      try {
        cells[i].validate();
        valid.push_back(i);
      } catch (const std::exception& error) {
        outcomes[i].error = error.what();
      }
    }
    if (valid.empty()) continue;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto estimates = detail::simulate_estimates(cells[valid.front()], threads);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (std::size_t i : valid) {
        try {
          detail::tally(outcomes[i], estimates);
        } catch (const std::exception& error) {
          outcomes[i].error = error.what();
        }
        outcomes[i].seconds = seconds;
      }
    } catch (const std::exception& error) {
      for (std::size_t i : valid) outcomes[i].error = error.what();
    }
  }
  return outcomes;
}

// Rejection rate of one cell. Throws on configuration errors.
inline CellOutcome run_cell(const SimulationCell& cell, unsigned threads = 1) {
  cell.validate();
  auto outcome = run_table({cell}, threads).front();
  if (!outcome.ok) throw NumericalError("simulation cell failed: " + outcome.error);
  return outcome;
}

// --------------------------------------------------------------------------
// Calibration and contour grids over the normal model.

inline double normal_index(IndexKind kind, double mu, double sigma) {
  return kind == IndexKind::kPi ? pi_normal_canonical(mu, sigma) : gamma_normal_canonical(mu, sigma);
}

// The mean mu with index(N(0,1), N(mu, sigma^2)) = target, by bisection on
// the closed form (decreasing in mu) to an interval width of 1e-10.
inline double calibrated_mean(double sigma, double target, IndexKind kind) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("calibrated_mean: sigma must be positive");
  if (!(target > 0.0 && target < 1.0)) throw DomainError("calibrated_mean: target must lie in (0,1)");
  if (kind == IndexKind::kGamma && sigma == 1.0) {
    throw DomainError("calibrated_mean: gamma only takes the values 0 and 1 when sigma = 1");
  }
  auto excess = [&](double mu) { return normal_index(kind, mu, sigma) - target; };
  double lo = -1.0;
  double hi = 1.0;
  for (int k = 0; excess(lo) <= 0.0; ++k) {
    if (k > 60) throw DomainError("calibrated_mean: target is not reachable");
    lo *= 2.0;
  }
  for (int k = 0; excess(hi) >= 0.0; ++k) {
    if (k > 60) throw DomainError("calibrated_mean: target is not reachable");
    hi *= 2.0;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Axis {
  double lo;
  double hi;
  std::size_t count;

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
  }
};

struct ContourGrid {
  IndexKind index = IndexKind::kGamma;
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<std::vector<double>> values;  // values[i][j] at (mu[i], sigma[j])
};

inline ContourGrid contour_grid(IndexKind kind, const Axis& mu_axis, const Axis& sigma_axis) {
  if (mu_axis.count < 2 || sigma_axis.count < 2) throw DomainError("contour_grid: need at least 2 points per axis");
  if (!(mu_axis.lo < mu_axis.hi) || !(sigma_axis.lo < sigma_axis.hi)) {
    throw DomainError("contour_grid: axis ranges must be increasing");
  }
  if (!(sigma_axis.lo > 0.0)) throw DomainError("contour_grid: sigma range must exclude 0");
  ContourGrid grid;
  grid.index = kind;
  grid.mu = mu_axis.points();
  grid.sigma = sigma_axis.points();
  grid.values.assign(grid.mu.size(), std::vector<double>(grid.sigma.size(), 0.0));
  for (std::size_t i = 0; i < grid.mu.size(); ++i) {
    for (std::size_t j = 0; j < grid.sigma.size(); ++j) {
      grid.values[i][j] = normal_index(kind, grid.mu[i], grid.sigma[j]);
    }
  }
  return grid;
}

// --------------------------------------------------------------------------
// Limit law of sqrt(nm/(n+m)) (pi(F_n, G_m) - pi(F, G)):
//   sup over t in T of sqrt(lambda) B1(t) - sqrt(1 - lambda) B2(t - pi)
// for independent Brownian bridges B1, B2 and the contact set
//   T = {t in [pi, 1] : G(x) = t and F(x) = t - pi for some x}.

struct ContactSet {
  double pi = 0.0;
  std::vector<double> levels;  // ascending, distinct
};

// Scans x over the 2 * grid quantile-spaced points of F and G and keeps
// t = G(x) wherever G(x) - F(x) is within 2/grid of its maximum.
template <ContinuousModel F, ContinuousModel G>
ContactSet contact_set(const F& f, const G& g, std::size_t grid) {
  if (grid < 1000) throw DomainError("contact_set: grid must be at least 1000");
  std::vector<double> xs;
  xs.reserve(2 * grid);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double t = (static_cast<double>(k) - 0.5) / static_cast<double>(grid);
    xs.push_back(f.quantile(t));
    xs.push_back(g.quantile(t));
  }
  std::vector<double> gaps(xs.size());
  double pi = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    gaps[k] = g.cdf(xs[k]) - f.cdf(xs[k]);
    pi = std::max(pi, gaps[k]);
  }
  const double tolerance = 2.0 / static_cast<double>(grid);
  ContactSet out;
  out.pi = pi;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(gaps[k] - pi) > tolerance) continue;
    const double t = g.cdf(xs[k]);
    if (t >= pi && t <= 1.0) out.levels.push_back(t);
  }
  std::sort(out.levels.begin(), out.levels.end());
  out.levels.erase(std::unique(out.levels.begin(), out.levels.end()), out.levels.end());
  return out;
}

// Draws from the limit law. Each draw simulates two bridges on the uniform
// grid {k / grid} with its own stream rng.child(draw) and takes the maximum
// over the contact set (levels snapped to the grid).
template <ContinuousModel F, ContinuousModel G>
std::vector<double> limit_law_sample(const RngStream& rng, const F& f, const G& g, double lambda, std::size_t grid,
                                     std::size_t draws, unsigned threads = 1) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("limit_law_sample: lambda must lie in (0,1)");
  const ContactSet contact = contact_set(f, g, grid);
  if (contact.levels.empty()) throw NumericalError("limit_law_sample: empty contact set");

  const double steps = static_cast<double>(grid);
  std::vector<std::pair<std::size_t, std::size_t>> nodes;
  nodes.reserve(contact.levels.size());
  for (double t : contact.levels) {
    const auto i = static_cast<std::size_t>(std::llround(t * steps));
    const auto j = static_cast<std::size_t>(std::llround(std::max(0.0, t - contact.pi) * steps));
    nodes.emplace_back(std::min(i, grid), std::min(j, grid));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const double w1 = std::sqrt(lambda);
  const double w2 = std::sqrt(1.0 - lambda);
  const double increment_sd = 1.0 / std::sqrt(steps);
  std::vector<double> out(draws);
  parallel_for(draws, threads, [&](std::size_t d) {
    RngStream stream = rng.child(d);
    std::vector<double> b1(grid + 1);
    std::vector<double> b2(grid + 1);
    for (auto* bridge : {&b1, &b2}) {
      auto& b = *bridge;
      b[0] = 0.0;
      for (std::size_t k = 1; k <= grid; ++k) b[k] = b[k - 1] + increment_sd * stream.standard_normal();
      const double end = b[grid];
      for (std::size_t k = 0; k <= grid; ++k) b[k] -= end * static_cast<double>(k) / steps;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : nodes) best = std::max(best, w1 * b1[i] - w2 * b2[j]);
    out[d] = best;
  });
  return out;
}

}  // namespace dominance
