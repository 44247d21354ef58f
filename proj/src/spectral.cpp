#include "imf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "imf/error.hpp"
#include "imf/kernels/kernels.hpp"

namespace imf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fejer_factor(std::size_t k, std::size_t order) {
  return 1.0 - static_cast<double>(k) / static_cast<double>(order + 1);
}

std::vector<double> series_weights(const std::vector<double>& moments, std::size_t order) {
  std::vector<double> w(order + 1);
  w[0] = moments[0] / kTwoPi;
  for (std::size_t k = 1; k <= order; ++k) {
    w[k] = 2.0 * fejer_factor(k, order) * moments[k] / kTwoPi;
  }
  return w;
}

void check_order(const std::vector<double>& moments, std::size_t order) {
  if (order == 0) throw DomainError("Fejer order must be at least 1");
  if (order + 1 > moments.size()) {
    throw DomainError("Fejer order " + std::to_string(order) + " needs " +
                      std::to_string(order + 1) + " moments, have " +
                      std::to_string(moments.size()));
  }
}

// Integral over [lo, hi] of the Fejer sum of `moments`.
double series_integral(const std::vector<double>& moments, std::size_t order, double lo,
                       double hi) {
  double sum = moments[0] * (hi - lo);
  for (std::size_t k = 1; k <= order; ++k) {
    const double kd = static_cast<double>(k);
    sum += 2.0 * fejer_factor(k, order) * moments[k] * (std::sin(kd * hi) - std::sin(kd * lo)) / kd;
  }
  return sum / kTwoPi;
}

// Fejer-sum mass and unit-atom kernel mass on the symmetric band
// w1 <= |s| <= w2.
struct Band {
  double mass;
  double kernel;
  double width;
};

Band band(const std::vector<double>& moments, const std::vector<double>& unit, std::size_t order,
          double w1, double w2) {
  return {2.0 * series_integral(moments, order, w1, w2),
          2.0 * series_integral(unit, order, w1, w2), 2.0 * (w2 - w1)};
}

double fit_atom(const Band& inner, const Band& outer) {
  const double det = inner.kernel * outer.width - outer.kernel * inner.width;
  return (inner.mass * outer.width - outer.mass * inner.width) / det;
}

AngleGrid evaluate(const std::vector<double>& moments, std::size_t order, std::size_t grid_size) {
  AngleGrid g;
  g.angles.resize(grid_size);
  g.density.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    g.angles[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(grid_size);
  }
  const auto w = series_weights(moments, order);
  kernels::active().cosine_series(w.data(), w.size(), g.angles.data(), g.density.data(),
                                  grid_size);
  return g;
}

}  // namespace

std::vector<double> cosine_moments(const PullbackSequence& seq) {
  if (seq.size() < 2) throw DomainError("cosine moments need a sequence of length >= 2");
  std::vector<double> m(seq.size());
  m[0] = seq.values[0];
  for (std::size_t k = 1; k < seq.size(); ++k) m[k] = 0.5 * seq.values[k];
  return m;
}

AngleGrid fejer_density(const std::vector<double>& moments, std::size_t order,
                        std::size_t grid_size) {
  check_order(moments, order);
  if (grid_size < 4 * order) throw DomainError("Fejer grid must have at least 4N points");
  return evaluate(moments, order, grid_size);
}

double fejer_value(const std::vector<double>& moments, std::size_t order, double s) {
  check_order(moments, order);
  double out = 0.0;
  const auto w = series_weights(moments, order);
  kernels::active().cosine_series(w.data(), w.size(), &s, &out, 1);
  return out;
}

AtomEstimate atom_at_zero(const PullbackSequence& seq, const AbelEstimate& abel,
                          std::size_t order) {
  const auto moments = cosine_moments(seq);
  check_order(moments, order);
  AtomEstimate out;
  out.value = 0.5 * abel.extrapolated;
  out.uncertainty = 0.5 * abel.uncertainty;

  const std::vector<double> unit(order + 1, 1.0);
  const double w = std::numbers::pi / static_cast<double>(order + 1);
  const Band inner = band(moments, unit, order, 0.0, w);
  const Band ring = band(moments, unit, order, w, 2.0 * w);
  const Band far = band(moments, unit, order, 2.0 * w, 3.0 * w);
  out.window_value = fit_atom(inner, ring);
  // A second background band shows how far the flat-background model is off.
  out.window_uncertainty = std::abs(out.window_value - fit_atom(inner, far)) +
                           0.5 * cesaro_engine_bound(seq, order + 1);
  out.consistent =
      std::abs(out.value - out.window_value) <= out.uncertainty + out.window_uncertainty;
  return out;
}

double SpectralMeasureEstimate::window_mass(double lo, double hi) const {
  if (!(hi >= lo)) return 0.0;
  double mass = series_integral(residual_moments, order, lo, hi);
  if (lo <= 0.0 || hi >= kTwoPi) mass += atom.value;
  return mass;
}

double SpectralMeasureEstimate::reconstructed_value(std::size_t k) const {
  if (k == 0) return total_mass;
  // Trapezoid rule on the grid; exact for trigonometric polynomials of degree
  // below the grid size.
  const std::size_t g = continuous.angles.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    sum += continuous.density[i] * std::cos(static_cast<double>(k) * continuous.angles[i]);
  }
  return 2.0 * (atom.value + sum * kTwoPi / static_cast<double>(g));
}

SpectralMeasureEstimate spectral_estimate(const PullbackSequence& seq, std::size_t order,
                                          std::size_t grid_size,
                                          const std::optional<std::vector<double>>& abel_grid) {
  SpectralMeasureEstimate est;
  est.moments = cosine_moments(seq);
  check_order(est.moments, order);
  if (grid_size == 0) grid_size = 4 * order;
  est.order = order;
  est.fejer = fejer_density(est.moments, order, grid_size);
  est.abel = abel_estimate(seq, abel_grid.value_or(imf::abel_grid(seq.size(), seq.total_mass)));
  est.atom = atom_at_zero(seq, est.abel, order);
  est.residual_moments = est.moments;
  for (auto& m : est.residual_moments) m -= est.atom.value;
  est.continuous = evaluate(est.residual_moments, order, grid_size);
  est.total_mass = est.moments[0];
  est.min_density = *std::min_element(est.fejer.density.begin(), est.fejer.density.end());
  for (std::size_t i = 1; i < grid_size; ++i) {
    est.symmetry_defect = std::max(
        est.symmetry_defect, std::abs(est.fejer.density[i] - est.fejer.density[grid_size - i]));
  }
  est.positive = est.min_density >= -1e-12 &&
                 est.atom.value <= est.total_mass + est.atom.uncertainty &&
                 est.atom.value >= -est.atom.uncertainty;
  return est;
}

double poisson_eval(const SpectralMeasureEstimate& est, double lambda) {
  if (!(std::abs(lambda) < 1.0)) throw DomainError("Poisson evaluation needs |lambda| < 1");
  const auto& g = est.continuous;
  const std::size_t n = g.angles.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double kernel = (1.0 - lambda * lambda) /
                          (1.0 - 2.0 * lambda * std::cos(g.angles[i]) + lambda * lambda);
    sum += kernel * g.density[i];
  }
  return sum * kTwoPi / static_cast<double>(n) +
         (1.0 + lambda) / (1.0 - lambda) * est.atom.value;
}

std::vector<double> smeared_measure_family(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const std::vector<IntervalSet>& sets, double s,
                                           const Budget& budget) {
  if (!(s >= 0.0 && s <= kTwoPi)) throw DomainError("angle must lie in [0, 2pi]");
  if (budget.n < 2) throw DomainError("smeared measures need n >= 2");
  const auto seqs = pullback_sequences(map, mu, sets, budget.n, budget.engine);
  const std::size_t order = std::min<std::size_t>(256, budget.n - 1);
  std::vector<double> out;
  for (const auto& seq : seqs) out.push_back(fejer_value(cosine_moments(seq), order, s));
  return out;
}

}  // namespace imf
