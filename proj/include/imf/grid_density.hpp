#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "imf/interval_set.hpp"

namespace imf {

/// Node layout of a density grid on [0,1].
enum class GridKind {
  uniform,  // x_i = i/N
  cosine    // x_i = (1 - cos(pi i/N))/2, clustered at both endpoints
};

/// Piecewise-constant density on a grid of N cells. `values()[c]` is the
/// average density on cell c, so integrals over unions of whole cells are
/// exact and the cumulative function is piecewise linear.
class GridDensity {
 public:
  GridDensity() = default;

  /// Density with the given cell averages. Throws DomainError for negative
  /// or non-finite values.
  GridDensity(GridKind kind, std::vector<double> cell_values);

  /// Constant density `level` on `cells` cells.
  static GridDensity constant(GridKind kind, std::size_t cells, double level);

  /// Density whose cell masses are given directly.
  static GridDensity from_cell_masses(GridKind kind, std::span<const double> masses);

  [[nodiscard]] GridKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t cells() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<double>& cell_masses() const noexcept { return masses_; }

  /// cumulative()[i] is the mass of [0, x_i]; size cells()+1.
  [[nodiscard]] const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  [[nodiscard]] double mass() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  /// Index of the cell containing x (the left cell at interior nodes is never
  /// chosen: x_i belongs to cell i). x = 1 maps to the last cell.
  [[nodiscard]] std::size_t locate(double x) const noexcept;

  /// Index c with x_c < x <= x_{c+1}; x = 0 maps to cell 0.
  [[nodiscard]] std::size_t locate_upper(double x) const noexcept;

  [[nodiscard]] double density_at(double x) const noexcept { return values_[locate(x)]; }

  /// Mass of [0, x].
  [[nodiscard]] double cumulative_at(double x) const noexcept;

  /// Bulk cumulative evaluation through the active kernel table.
  void cumulative_at(std::span<const double> x, std::span<double> out) const;

  /// Mass of the set.
  [[nodiscard]] double integrate_over(const IntervalSet& set) const;

  /// Integral of f against the density, 8-point Gauss-Legendre per cell.
  [[nodiscard]] double integrate(const std::function<double(double)>& f) const;

  /// L1 distance between two densities on the same grid.
  [[nodiscard]] double l1_distance(const GridDensity& other) const;

  /// Pointwise a*this + b*other on the same grid, for a, b >= 0.
  [[nodiscard]] GridDensity combine(double a, const GridDensity& other, double b) const;

 private:
  void rebuild();

  GridKind kind_ = GridKind::uniform;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

/// Node coordinates of a grid with `cells` cells.
std::vector<double> grid_nodes(GridKind kind, std::size_t cells);

}  // namespace imf
