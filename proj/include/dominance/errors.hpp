// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dominance {

// Argument outside the mathematical domain of an operation (nonpositive
// scale, probability outside (0,1), unreachable calibration target).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or too-small data (non-finite values, fewer than two points).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid combination of options, e.g. B < 50 or a least-favorable gamma test.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The asymptotic variance of the crossing-mass estimator blows up when the
// two densities agree at the crossing point.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal numerical failure (empty contact set, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dominance
