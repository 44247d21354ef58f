#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imf/dynamics.hpp"
#include "imf/grid_density.hpp"
#include "imf/interval_set.hpp"
#include "imf/rng.hpp"

namespace imf {

/// Finite measure on [0,1] with a density and optionally a closed-form
/// cumulative function (and its inverse, for sampling).
struct DensityMeasure {
  std::string name;
  RealFn density;
  std::optional<RealFn> cdf;
  std::optional<RealFn> inverse_cdf;  // for probability measures
  double total_mass = 1.0;
  double density_bound = 1.0;  // sup of the density on [0,1]
  std::optional<double> constant_density;  // set when the density is constant
};

DensityMeasure lebesgue_measure();

/// Density 1/((ln 2)(1+x)), cdf log2(1+x).
DensityMeasure gauss_measure();

/// Measure with a piecewise-linear density through the samples `x rho`
/// (one pair per line, x from 0 to 1 increasing). Closed-form cdf.
DensityMeasure measure_from_sample_text(std::string name, std::string_view text);

/// `lebesgue` or `gauss`.
DensityMeasure builtin_measure(std::string_view name);

/// Adaptive Gauss-Kronrod integral of f over [a,b]; absolute tolerance `tol`.
/// Throws NumericError on non-finite values or when the tolerance is not met
/// within ~1e6 evaluations.
double adaptive_integrate(const RealFn& f, double a, double b, double tol = 1e-10);

/// mu(A): cdf differences when available, adaptive quadrature otherwise.
double measure_of(const DensityMeasure& mu, const IntervalSet& set);

/// Integral of f against mu, absolute tolerance 1e-9.
double integrate(const RealFn& f, const DensityMeasure& mu);

/// One draw from mu normalized to a probability: inverse cdf when available,
/// rejection against density_bound otherwise.
double sample(const DensityMeasure& mu, Rng& rng);

/// Cell averages of mu's density on a grid.
GridDensity discretize(const DensityMeasure& mu, GridKind kind, std::size_t cells);

/// Set function A -> mu(A) - s * mu(phi^{-1} A), |s| < 1. The value may be
/// negative; it exists only as an evaluator.
class SignedPullbackCombination {
 public:
  SignedPullbackCombination(DensityMeasure mu, PiecewiseMap map, double s,
                            PreimageOptions opts = {});

  [[nodiscard]] double operator()(const IntervalSet& set) const;

  /// Bound on the error of operator() from omitted countable branches.
  [[nodiscard]] double error_bound(const IntervalSet& set) const;

 private:
  DensityMeasure mu_;
  PiecewiseMap map_;
  double s_;
  PreimageOptions opts_;
};

SignedPullbackCombination signed_pullback_combination(const DensityMeasure& mu,
                                                      const PiecewiseMap& map, double s);

}  // namespace imf
