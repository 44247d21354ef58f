#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "imf/mgf.hpp"
#include "imf/pullback.hpp"

namespace imf {

/// [c_0, c_1/2, c_2/2, ...]: the cosine moments of the spectral measure
/// sigma on [0, 2pi] whose Poisson integral is the generating function.
/// Throws DomainError for sequences shorter than 2.
std::vector<double> cosine_moments(const PullbackSequence& seq);

/// Density samples on s_i = 2 pi i / size, i < size.
struct AngleGrid {
  std::vector<double> angles;
  std::vector<double> density;
};

/// Fejer sum (1/2pi)[m_0 + 2 sum_{k=1}^{N} (1 - k/(N+1)) m_k cos ks] through
/// the active kernel table. Throws DomainError if N + 1 > moments.size() or
/// grid_size < 4N.
AngleGrid fejer_density(const std::vector<double>& moments, std::size_t order,
                        std::size_t grid_size);

/// The same sum at one angle.
double fejer_value(const std::vector<double>& moments, std::size_t order, double s);

struct AtomEstimate {
  double value = 0.0;  // abel / 2
  double uncertainty = 0.0;
  /// Secondary estimate from the Fejer sum on |s| <= pi/(N+1), with the
  /// background level fitted on the neighbouring band.
  double window_value = 0.0;
  double window_uncertainty = 0.0;
  /// |value - window_value| within the combined uncertainty.
  bool consistent = true;
};

AtomEstimate atom_at_zero(const PullbackSequence& seq, const AbelEstimate& abel,
                          std::size_t order = 256);

/// sigma = atom * delta_0 + continuous part, the continuous part being the
/// Fejer sum of the moments with the atom removed.
struct SpectralMeasureEstimate {
  std::vector<double> moments;
  std::vector<double> residual_moments;  // m_k - atom, k >= 0
  std::size_t order = 0;
  AngleGrid fejer;       // Fejer sum of the raw moments
  AngleGrid continuous;  // Fejer sum of the atom-removed moments
  AtomEstimate atom;
  AbelEstimate abel;
  double total_mass = 0.0;  // m_0
  double min_density = 0.0;  // of `fejer`
  double symmetry_defect = 0.0;  // max |f(s) - f(2pi - s)|
  /// The moments are those of a positive measure as far as the checks
  /// can tell: Fejer sum >= -1e-12 and atom <= total mass.
  bool positive = true;

  /// Mass of [lo, hi] (angles in [0, 2pi]); includes the atom if 0 or 2pi
  /// lies in the interval.
  [[nodiscard]] double window_mass(double lo, double hi) const;

  /// 2 * (atom + int cos(ks) d continuous), the estimate's own c_k.
  [[nodiscard]] double reconstructed_value(std::size_t k) const;
};

/// Order N needs at least N+1 terms; grid_size 0 means 4N.
SpectralMeasureEstimate spectral_estimate(const PullbackSequence& seq, std::size_t order = 256,
                                          std::size_t grid_size = 0,
                                          const std::optional<std::vector<double>>& abel_grid = {});

/// Trapezoid integral of the Poisson kernel against the continuous part
/// plus (1+lambda)/(1-lambda) * atom. Throws DomainError unless |lambda| < 1.
double poisson_eval(const SpectralMeasureEstimate& est, double lambda);

/// Fejer density at angle s for each set's sequence (length budget.n).
std::vector<double> smeared_measure_family(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const std::vector<IntervalSet>& sets, double s,
                                           const Budget& budget = {});

}  // namespace imf
