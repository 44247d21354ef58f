#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imf/dynamics.hpp"
#include "imf/grid_density.hpp"
#include "imf/interval_set.hpp"
#include "imf/measures.hpp"

namespace imf {

enum class Engine { geometric, transfer, montecarlo };

std::string_view to_string(Engine e) noexcept;
Engine parse_engine(std::string_view name);

/// Geometric for finite piecewise-affine maps, transfer otherwise.
Engine default_engine(const PiecewiseMap& map) noexcept;

struct EngineOptions {
  std::optional<Engine> engine;  // unset: default_engine(map)

  // geometric
  PreimageOptions preimage;

  // transfer
  std::size_t grid_cells = 4096;
  std::optional<GridKind> grid_kind;  // unset: map.preferred_grid()
  TransferOptions transfer;
  /// Iteration stops once one step moves less than this much L1 mass
  /// (relative to mu(M), and never below the grid's rounding floor); later
  /// iterates reuse the last density and carry (steps skipped) * delta.
  double stationarity_tol = 1e-12;
  /// Repeat the run on a grid of half the cells and add the difference to
  /// the error bounds.
  bool estimate_grid_error = true;

  // montecarlo
  std::size_t samples = 100'000;
  std::uint64_t seed = 0x5eed;
};

struct Provenance {
  std::string map;
  std::string measure;
  std::string set;
  Engine engine = Engine::geometric;
  std::uint64_t seed = 0;
  std::size_t grid_cells = 0;
  std::size_t samples = 0;
};

/// c_k = mu(phi^{-k} A), k = 0..n-1, each with a nonnegative error bound.
struct PullbackSequence {
  std::vector<double> values;
  std::vector<double> error_bounds;
  double total_mass = 1.0;  // mu(M)
  Provenance provenance;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double max_error() const noexcept;

  /// Sequence with the given values and zero error bounds (fixtures, tests).
  static PullbackSequence from_values(std::vector<double> values, double total_mass = 1.0);
};

/// One sequence of length n per set; the transfer engine shares its
/// iterates across the sets. Throws DomainError for n == 0 or an engine the
/// map cannot use, CapacityError from the geometric engine.
std::vector<PullbackSequence> pullback_sequences(const PiecewiseMap& map,
                                                 const DensityMeasure& mu,
                                                 const std::vector<IntervalSet>& sets,
                                                 std::size_t n, const EngineOptions& opts = {});

PullbackSequence pullback_sequence(const PiecewiseMap& map, const DensityMeasure& mu,
                                   const IntervalSet& set, std::size_t n,
                                   const EngineOptions& opts = {});

/// Density average (1/n) sum_{k<n} L^k rho_0 of the transfer engine, the
/// numerical stand-in for the invariant measure.
struct CesaroDensity {
  GridDensity density;
  double error_bound = 0.0;  // L1 error from tails and skipped steps
};

CesaroDensity cesaro_density(const PiecewiseMap& map, const DensityMeasure& mu, std::size_t n,
                             const EngineOptions& opts = {});

}  // namespace imf
