#include "imf/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "imf/error.hpp"
#include "imf/kernels/kernels.hpp"

namespace imf {

std::vector<double> grid_nodes(GridKind kind, std::size_t cells) {
  if (cells == 0) throw DomainError("grid needs at least one cell");
  std::vector<double> nodes(cells + 1);
  const double n = static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double t = static_cast<double>(i) / n;
    nodes[i] = kind == GridKind::uniform ? t : 0.5 * (1.0 - std::cos(std::numbers::pi * t));
  }
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  return nodes;
}

GridDensity::GridDensity(GridKind kind, std::vector<double> cell_values)
    : kind_(kind), values_(std::move(cell_values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid density has a non-finite value");
    if (v < 0.0) throw DomainError("grid density has a negative value");
  }
  nodes_ = grid_nodes(kind_, values_.size());
  rebuild();
}

GridDensity GridDensity::constant(GridKind kind, std::size_t cells, double level) {
  return GridDensity(kind, std::vector<double>(cells, level));
}

GridDensity GridDensity::from_cell_masses(GridKind kind, std::span<const double> masses) {
  const auto nodes = grid_nodes(kind, masses.size());
  std::vector<double> values(masses.size());
  for (std::size_t c = 0; c < masses.size(); ++c) {
    values[c] = masses[c] / (nodes[c + 1] - nodes[c]);
  }
  return GridDensity(kind, std::move(values));
}

void GridDensity::rebuild() {
  const std::size_t n = values_.size();
  masses_.resize(n);
  cumulative_.assign(n + 1, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    masses_[c] = values_[c] * (nodes_[c + 1] - nodes_[c]);
    cumulative_[c + 1] = cumulative_[c] + masses_[c];
  }
}

std::size_t GridDensity::locate(double x) const noexcept {
  const std::size_t n = values_.size();
  if (!(x > 0.0)) return 0;
  if (x >= 1.0) return n - 1;
  std::size_t c = 0;
  if (kind_ == GridKind::uniform) {
    c = static_cast<std::size_t>(x * static_cast<double>(n));
  } else {
    c = static_cast<std::size_t>(std::acos(1.0 - 2.0 * x) / std::numbers::pi * static_cast<double>(n));
  }
  c = std::min(c, n - 1);
  while (c > 0 && x < nodes_[c]) --c;
  while (c + 1 < n && x >= nodes_[c + 1]) ++c;
  return c;
}

std::size_t GridDensity::locate_upper(double x) const noexcept {
  const std::size_t c = locate(x);
  if (c > 0 && x == nodes_[c]) return c - 1;
  return c;
}

double GridDensity::cumulative_at(double x) const noexcept {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return mass();
  const std::size_t c = locate(x);
  return cumulative_[c] + (x - nodes_[c]) * values_[c];
}

void GridDensity::cumulative_at(std::span<const double> x, std::span<double> out) const {
  if (kind_ == GridKind::uniform) {
    kernels::active().cumulative_uniform(cumulative_.data(), masses_.data(), values_.size(),
                                         x.data(), out.data(), x.size());
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = cumulative_at(x[i]);
}

double GridDensity::integrate_over(const IntervalSet& set) const {
  double sum = 0.0;
  for (const auto& iv : set.components()) sum += cumulative_at(iv.hi) - cumulative_at(iv.lo);
  return sum;
}

double GridDensity::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t c = 0; c < values_.size(); ++c) {
    if (values_[c] == 0.0) continue;
    const double part =
        boost::math::quadrature::gauss<double, 8>::integrate(f, nodes_[c], nodes_[c + 1]);
    if (!std::isfinite(part)) throw NumericError("integrand is not finite on a grid cell");
    sum += values_[c] * part;
  }
  return sum;
}

double GridDensity::l1_distance(const GridDensity& other) const {
  if (other.values_.size() != values_.size() || other.kind_ != kind_) {
    throw DomainError("densities live on different grids");
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < values_.size(); ++c) {
    sum += std::abs(masses_[c] - other.masses_[c]);
  }
  return sum;
}

GridDensity GridDensity::combine(double a, const GridDensity& other, double b) const {
  if (other.values_.size() != values_.size() || other.kind_ != kind_) {
    throw DomainError("densities live on different grids");
  }
  if (a < 0.0 || b < 0.0) throw DomainError("combine weights must be nonnegative");
  std::vector<double> v(values_.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = a * values_[c] + b * other.values_[c];
  return GridDensity(kind_, std::move(v));
}

}  // namespace imf
