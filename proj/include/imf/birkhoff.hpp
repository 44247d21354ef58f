#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "imf/dynamics.hpp"
#include "imf/measures.hpp"
#include "imf/pullback.hpp"

namespace imf {

struct BirkhoffOptions {
  OrbitOptions orbit;
  /// Number of log-spaced checkpoints in the running profile (0: none). The
  /// last checkpoint is always n.
  std::size_t profile_points = 0;
};

struct OrbitAverageResult {
  double x0 = 0.0;
  std::size_t n = 0;
  double average = 0.0;
  std::vector<std::pair<std::size_t, double>> running_profile;
  bool dithered = false;
  std::uint64_t seed = 0;
  bool degenerate = false;
  std::size_t degenerate_step = 0;
};

/// (1/n) sum_{k<n} f(phi^k x0). Degenerate orbits (Gauss reaching 0) are
/// flagged, not rejected. Throws DomainError for n == 0 or x0 outside [0,1].
OrbitAverageResult birkhoff_average(const PiecewiseMap& map, const std::function<double(double)>& f,
                                    double x0, std::size_t n, const BirkhoffOptions& opts = {});

/// One average per starting point; orbit i uses seed Rng::derive(seed, i).
std::vector<OrbitAverageResult> time_average_function(const PiecewiseMap& map,
                                                      const std::function<double(double)>& f,
                                                      const std::vector<double>& points,
                                                      std::size_t n,
                                                      const BirkhoffOptions& opts = {});

struct DualityResult {
  double lhs = 0.0;  // mean over x ~ mu of the orbit average
  double rhs = 0.0;  // int f d(transfer Cesaro density)
  double gap = 0.0;
  double uncertainty = 0.0;  // 3 standard errors + density error * sup|f|
};

/// Both sides use orbit length n_orbit, so they estimate the same quantity.
DualityResult duality_check(const PiecewiseMap& map, const DensityMeasure& mu,
                            const std::function<double(double)>& f, std::size_t n_orbit,
                            std::size_t n_samples, std::uint64_t seed,
                            const EngineOptions& engine = {});

struct DigitFrequency {
  std::size_t digit = 0;
  double empirical = 0.0;
  double closed_form = 0.0;  // log2((k+1)^2 / (k(k+2)))
};

struct DigitTable {
  std::vector<DigitFrequency> rows;
  bool degenerate = false;
  std::size_t degenerate_step = 0;
};

/// Continued-fraction digit frequencies along the Gauss orbit of x0.
DigitTable gauss_digit_frequencies(std::size_t k_max, std::size_t n, double x0);

/// log2((k+1)^2 / (k(k+2))).
double gauss_kuzmin_frequency(std::size_t k);

}  // namespace imf
