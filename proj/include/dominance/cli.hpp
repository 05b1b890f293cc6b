// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"
#include "dominance/indices.hpp"
#include "dominance/inference.hpp"
#include "dominance/io.hpp"
#include "dominance/parallel.hpp"
#include "dominance/report.hpp"
#include "dominance/simulation.hpp"

namespace dominance::cli {

enum class Command { kIndex, kTest, kSimulate, kContour };
enum class OutputFormat { kJson, kCsv };

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::kIndex;
  std::vector<std::string> inputs;
  IndexKind index = IndexKind::kPi;
  std::vector<double> delta0 = {0.05};
  double alpha = 0.05;
  TestMethod method = TestMethod::kBootstrap;
  std::size_t replicates = kDefaultBootstrapReplicates;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output;  // empty: standard output
  OutputFormat format = OutputFormat::kJson;
  bool assume_normal = false;
  bool bias_correct_gamma = false;

  // simulate: either a preset design or explicit lists (Cartesian product).
  std::string preset;  // "", "pi-grid" or "gamma-grid"
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;  // empty: m = n
  bool timing = false;

  // contour
  std::optional<Axis> mu_range;
  std::optional<Axis> sigma_range;

  void validate() const {
    for (double d : delta0) {
      if (!(d > 0.0 && d < 1.0)) throw ConfigError("--delta0 must lie in (0,1)");
    }
    if (delta0.empty()) throw ConfigError("--delta0 needs at least one value");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must lie in (0,1)");
    if (replicates < kMinBootstrapReplicates) throw ConfigError("--B must be at least 50");
    if (reps < 1) throw ConfigError("--reps must be at least 1");
    if (threads < 1) throw ConfigError("--threads must be at least 1");
  }
};

// "a:b:n" with a < b and n >= 2.
inline Axis parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("range '" + text + "' must have the form a:b:n");
  try {
    std::size_t used = 0;
    const double lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw ConfigError("bad range start");
    const double hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw ConfigError("bad range end");
    const long count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw ConfigError("bad range count");
    if (!(lo < hi) || count < 2 || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ConfigError("range '" + text + "' must satisfy a < b and n >= 2");
    }
    return {lo, hi, static_cast<std::size_t>(count)};
  } catch (const std::logic_error&) {
    throw ConfigError("range '" + text + "' must have the form a:b:n");
  }
}

namespace detail {

inline std::pair<EmpiricalDistribution, EmpiricalDistribution> load_samples(const RunConfig& config) {
  const auto samples = read_samples(config.inputs);
  if (samples.x.size() < 2 || samples.y.size() < 2) {
    throw InputError("each sample needs at least 2 values (got " + std::to_string(samples.x.size()) + " and " +
                     std::to_string(samples.y.size()) + ")");
  }
  return {empirical_from(samples.x), empirical_from(samples.y)};
}

inline void require_json(const RunConfig& config, const char* command) {
  if (config.format != OutputFormat::kJson) {
    throw ConfigError(std::string("csv output is only available for simulate and contour, not ") + command);
  }
}

inline TestSpec test_spec(const RunConfig& config) {
  if (config.delta0.size() != 1) throw ConfigError("test takes a single --delta0");
  TestSpec spec;
  spec.index = config.index;
  spec.delta0 = config.delta0.front();
  spec.alpha = config.alpha;
  spec.method = config.method;
  spec.replicates = config.replicates;
  spec.bias_correct_gamma = config.bias_correct_gamma;
  spec.threads = config.threads;
  spec.validate();
  return spec;
}

inline std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// --------------------------------------------------------------------------

struct IndexSummary {
  std::size_t n = 0;
  std::size_t m = 0;
  double pi = 0.0;
  PsiCurve psi;
  double crossing_mass = 0.0;
  std::optional<NormalFit> fit_x;
  std::optional<NormalFit> fit_y;
  std::optional<DominanceIndices> plugin;
};

inline IndexSummary summarize(const EmpiricalDistribution& x, const EmpiricalDistribution& y, bool assume_normal) {
  IndexSummary s;
  s.n = x.size();
  s.m = y.size();
  s.pi = pi_empirical(x, y);
  s.psi = gamma_empirical(x, y);
  s.crossing_mass = crossing_mass_empirical(x, y);
  if (assume_normal) {
    s.fit_x = fit_normal(x);
    s.fit_y = fit_normal(y);
    s.plugin = normal_indices(s.fit_x->mean, s.fit_x->sd, s.fit_y->mean, s.fit_y->sd);
  }
  return s;
}

inline std::string index_document(const IndexSummary& s) {
  JsonWriter json;
  json.begin_object();
  json.field("schema", kSchema).field("command", "index");
  json.field("n", s.n).field("m", s.m);
  json.field("pi", s.pi);
  json.field("gamma_hat", s.psi.gamma_hat).field("gamma_star", s.psi.gamma_star);
  json.field("psi_at_star", s.psi.psi_at_star);
  json.field("psi_start", s.psi.values.front()).field("psi_end", s.psi.values.back());
  json.field("gamma_degenerate", s.psi.degenerate);
  json.field("crossing_mass", s.crossing_mass);
  if (s.plugin) {
    json.key("plugin").begin_object();
    json.field("x_mean", s.fit_x->mean).field("x_sd", s.fit_x->sd);
    json.field("y_mean", s.fit_y->mean).field("y_sd", s.fit_y->sd);
    json.field("pi", s.plugin->pi).field("gamma", s.plugin->gamma);
    json.end_object();
  }
  json.end_object();
  return json.str();
}

inline std::string cmd_index(const RunConfig& config) {
  config.validate();
  detail::require_json(config, "index");
  const auto [x, y] = detail::load_samples(config);
  return index_document(summarize(x, y, config.assume_normal));
}

inline std::string test_document(const TestReport& r, std::uint64_t seed) {
  JsonWriter json;
  json.begin_object();
  json.field("schema", kSchema).field("command", "test");
  json.field("index", to_string(r.index)).field("method", to_string(r.method));
  json.field("delta0", r.delta0).field("alpha", r.alpha);
  json.field("n", r.n).field("m", r.m);
  json.field("B", r.replicates).field("seed", seed);
  json.field("estimate_raw", r.estimate_raw).field("estimate_used", r.estimate_used);
  json.field("sigma_used", r.sigma_used);
  json.field("statistic", r.statistic).field("critical", r.critical);
  json.field("reject", r.reject);
  json.field("upper_bound", r.upper_bound);
  json.field("lambda_nm", r.lambda_nm);
  json.key("bootstrap_se");
  r.bootstrap_se ? json.value(*r.bootstrap_se) : json.null();
  json.key("contact_level");
  r.contact_level ? json.value(*r.contact_level) : json.null();
  json.field("degeneracy_flag", r.degeneracy_flag);
  json.key("warnings").begin_array();
  for (const auto& w : r.warnings) json.value(w);
  json.end_array();
  json.end_object();
  return json.str();
}

// The decision is data: a completed test exits 0 whether or not it rejects.
inline std::string cmd_test(const RunConfig& config) {
  config.validate();
  detail::require_json(config, "test");
  const TestSpec spec = detail::test_spec(config);
  const auto [x, y] = detail::load_samples(config);
  const TestReport report = run_test(RngStream(config.seed, 0), x, y, spec);
  return test_document(report, config.seed);
}

// Cells for the two reference designs: F = N(0,1), G = N(mu, sigma^2) with mu
// calibrated so that the index equals 0.01, 0.05 and 0.10, crossed with
// delta0 in {0.01, 0.05, 0.10}.
inline std::vector<SimulationCell> preset_cells(const std::string& preset, const std::vector<std::size_t>& sizes,
                                                TestMethod method, std::size_t replicates, std::size_t reps,
                                                std::uint64_t seed, double alpha) {
  IndexKind kind = IndexKind::kPi;
  std::vector<double> sigmas;
  if (preset == "pi-grid") {
    kind = IndexKind::kPi;
    sigmas = {0.7, 1.0, 1.5};
  } else if (preset == "gamma-grid") {
    kind = IndexKind::kGamma;
    sigmas = {1.1, 1.5, 2.0};
  } else {
    throw ConfigError("unknown preset '" + preset + "' (expected pi-grid or gamma-grid)");
  }
  const double levels[] = {0.01, 0.05, 0.10};
  std::vector<SimulationCell> cells;
  for (double delta0 : levels) {
    for (std::size_t size : sizes) {
      for (double sigma : sigmas) {
        for (double target : levels) {
          SimulationCell cell;
          cell.sigma = sigma;
          cell.mu = calibrated_mean(sigma, target, kind);
          cell.n = size;
          cell.m = size;
          cell.index = kind;
          cell.delta0 = delta0;
          cell.alpha = alpha;
          cell.method = method;
          cell.replicates = replicates;
          cell.reps = reps;
          cell.seed = seed;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

inline std::vector<SimulationCell> simulation_cells(const RunConfig& config) {
  if (!config.preset.empty()) {
    const auto sizes = config.n.empty() ? std::vector<std::size_t>{100, 1000} : config.n;
    return preset_cells(config.preset, sizes, config.method, config.replicates, config.reps, config.seed,
                        config.alpha);
  }
  if (config.mu.empty() || config.sigma.empty() || config.n.empty()) {
    throw ConfigError("simulate needs --preset or all of --mu, --sigma and --n");
  }
  if (!config.m.empty() && config.m.size() != config.n.size()) {
    throw ConfigError("--m must list as many sizes as --n");
  }
  std::vector<SimulationCell> cells;
  for (double delta0 : config.delta0) {
    for (std::size_t k = 0; k < config.n.size(); ++k) {
      for (double sigma : config.sigma) {
        for (double mu : config.mu) {
          SimulationCell cell;
          cell.mu = mu;
          cell.sigma = sigma;
          cell.n = config.n[k];
          cell.m = config.m.empty() ? config.n[k] : config.m[k];
          cell.index = config.index;
          cell.delta0 = delta0;
          cell.alpha = config.alpha;
          cell.method = config.method;
          cell.replicates = config.replicates;
          cell.reps = config.reps;
          cell.seed = config.seed;
          cell.bias_correct_gamma = config.bias_correct_gamma;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

inline std::string simulation_document(const std::vector<CellOutcome>& rows, OutputFormat format, bool timing) {
  if (format == OutputFormat::kCsv) {
    std::string out = "index,method,mu,sigma,n,m,delta0,alpha,B,reps,seed,rejections,rate,mc_se,status";
    if (timing) out += ",wall_seconds";
    out += '\n';
    for (const auto& row : rows) {
      const auto& c = row.cell;
      out += std::string(to_string(c.index)) + ',' + to_string(c.method) + ',' + format_double(c.mu) + ',' +
             format_double(c.sigma) + ',' + std::to_string(c.n) + ',' + std::to_string(c.m) + ',' +
             format_double(c.delta0) + ',' + format_double(c.alpha) + ',' + std::to_string(c.replicates) + ',' +
             std::to_string(c.reps) + ',' + std::to_string(c.seed) + ',';
      if (row.ok) {
        out += std::to_string(row.rejections) + ',' + format_double(row.rate) + ',' + format_double(row.mc_se) + ",ok";
      } else {
        out += ",,," + detail::csv_escape("error: " + row.error);
      }
      if (timing) out += ',' + format_double(row.seconds);
      out += '\n';
    }
    return out;
  }
  JsonWriter json;
  json.begin_object();
  json.field("schema", kSchema).field("command", "simulate");
  json.key("rows").begin_array();
  for (const auto& row : rows) {
    const auto& c = row.cell;
    json.begin_object();
    json.field("index", to_string(c.index)).field("method", to_string(c.method));
    json.field("mu", c.mu).field("sigma", c.sigma).field("n", c.n).field("m", c.m);
    json.field("delta0", c.delta0).field("alpha", c.alpha).field("B", c.replicates);
    json.field("reps", c.reps).field("seed", c.seed);
    if (row.ok) {
      json.field("rejections", row.rejections).field("rate", row.rate).field("mc_se", row.mc_se);
      json.field("status", "ok");
    } else {
      json.key("rejections").null().key("rate").null().key("mc_se").null();
      json.field("status", "error: " + row.error);
    }
    if (timing) json.field("wall_seconds", row.seconds);
    json.end_object();
  }
  json.end_array();
  json.end_object();
  return json.str();
}

inline std::string cmd_simulate(const RunConfig& config) {
  config.validate();
  const auto cells = simulation_cells(config);
  return simulation_document(run_table(cells, config.threads), config.format, config.timing);
}

inline std::string contour_document(const ContourGrid& grid, OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    std::string out = "mu,sigma,value\n";
    for (std::size_t i = 0; i < grid.mu.size(); ++i) {
      for (std::size_t j = 0; j < grid.sigma.size(); ++j) {
        out += format_double(grid.mu[i]) + ',' + format_double(grid.sigma[j]) + ',' + format_double(grid.values[i][j]) +
               '\n';
      }
    }
    return out;
  }
  JsonWriter json;
  json.begin_object();
  json.field("schema", kSchema).field("command", "contour");
  json.field("index", to_string(grid.index));
  json.key("records").begin_array();
  for (std::size_t i = 0; i < grid.mu.size(); ++i) {
    for (std::size_t j = 0; j < grid.sigma.size(); ++j) {
      json.begin_object();
      json.field("mu", grid.mu[i]).field("sigma", grid.sigma[j]).field("value", grid.values[i][j]);
      json.end_object();
    }
  }
  json.end_array();
  json.end_object();
  return json.str();
}

inline std::string cmd_contour(const RunConfig& config) {
  config.validate();
  if (!config.mu_range || !config.sigma_range) throw ConfigError("contour needs --mu-range and --sigma-range");
  try {
    return contour_document(contour_grid(config.index, *config.mu_range, *config.sigma_range), config.format);
  } catch (const DomainError& error) {
    throw ConfigError(error.what());
  }
}

inline std::string run(const RunConfig& config) {
  switch (config.command) {
    case Command::kIndex:
      return cmd_index(config);
    case Command::kTest:
      return cmd_test(config);
    case Command::kSimulate:
      return cmd_simulate(config);
    case Command::kContour:
      return cmd_contour(config);
  }
  throw ConfigError("unknown command");
}

// Maps an exception escaping run() to the tool's exit code.
inline int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const InputError*>(&error) || dynamic_cast<const ConfigError*>(&error) ||
      dynamic_cast<const DomainError*>(&error)) {
    return kExitUsage;
  }
  return kExitNumerical;
}

}  // namespace dominance::cli
