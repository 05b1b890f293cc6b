// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <utility>

#include "dominance/errors.hpp"
#include "dominance/normal.hpp"
#include "dominance/random.hpp"

namespace dominance {

enum class ModelKind { kStandardNormal, kLocationScale, kOtherReference };

// A continuous univariate law: distribution function, quantile function,
// density and a kind tag.
template <class M>
concept ContinuousModel = requires(const M& model, double x) {
  { model.cdf(x) } -> std::convertible_to<double>;
  { model.quantile(x) } -> std::convertible_to<double>;
  { model.density(x) } -> std::convertible_to<double>;
  { model.kind() } -> std::same_as<ModelKind>;
};

// A model that can also draw variates from an RngStream.
template <class M>
concept SampleableModel = ContinuousModel<M> && requires(const M& model, RngStream& rng) {
  { model.draw(rng) } -> std::convertible_to<double>;
};

struct StandardNormal {
  double cdf(double x) const noexcept { return std_normal_cdf(x); }
  double ccdf(double x) const noexcept { return std_normal_ccdf(x); }
  double quantile(double p) const { return std_normal_quantile(p); }
  double density(double x) const noexcept { return std_normal_pdf(x); }
  double draw(RngStream& rng) const noexcept { return rng.standard_normal(); }
  constexpr ModelKind kind() const noexcept { return ModelKind::kStandardNormal; }
};

// F(x) = F0((x - location) / scale) over a continuous, strictly increasing
// reference F0. Quantiles satisfy F^{-1}(y) = scale * F0^{-1}(y) + location.
template <ContinuousModel Reference = StandardNormal>
class LocationScale {
 public:
  LocationScale(double location, double scale, Reference reference = Reference{})
      : location_(location), scale_(scale), reference_(std::move(reference)) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(location)) {
      throw DomainError("location-scale model requires finite location and positive scale, got scale " +
                        std::to_string(scale));
    }
  }

  double location() const noexcept { return location_; }
  double scale() const noexcept { return scale_; }
  const Reference& reference() const noexcept { return reference_; }

  double standardize(double x) const noexcept { return (x - location_) / scale_; }

  double cdf(double x) const { return reference_.cdf(standardize(x)); }
  double quantile(double p) const { return scale_ * reference_.quantile(p) + location_; }
  double density(double x) const { return reference_.density(standardize(x)) / scale_; }

  double draw(RngStream& rng) const
    requires SampleableModel<Reference>
  {
    return location_ + scale_ * reference_.draw(rng);
  }

  constexpr ModelKind kind() const noexcept { return ModelKind::kLocationScale; }

  // The law of scale * X + location where X follows *this.
  LocationScale reparametrized(double location, double scale) const {
    return LocationScale(scale * location_ + location, scale * scale_, reference_);
  }

 private:
  double location_;
  double scale_;
  Reference reference_;
};

using Normal = LocationScale<StandardNormal>;

// Evaluates a location-scale model by name of the function.
enum class ModelFunction { kCdf, kQuantile, kDensity };

template <ContinuousModel Reference>
double ls_eval(const LocationScale<Reference>& model, ModelFunction what, double arg) {
  switch (what) {
    case ModelFunction::kCdf:
      return model.cdf(arg);
    case ModelFunction::kQuantile:
      if (!(arg > 0.0 && arg < 1.0)) throw DomainError("ls_eval: quantile argument must lie in (0,1)");
      return model.quantile(arg);
    case ModelFunction::kDensity:
      return model.density(arg);
  }
  throw DomainError("ls_eval: unknown function");
}

}  // namespace dominance
