#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imf/grid_density.hpp"
#include "imf/interval_set.hpp"
#include "imf/kernels/kernels.hpp"
#include "imf/rng.hpp"

namespace imf {

using RealFn = std::function<double(double)>;

/// One monotone piece of a map: `forward` sends `domain` onto `image`, and
/// `inverse` is the right inverse from `image` back into `domain`.
struct Branch {
  Interval domain;
  Interval image;
  bool increasing = true;
  RealFn forward;
  RealFn inverse;
  RealFn inverse_derivative;  // |g'(y)|
  std::optional<kernels::InverseSpec> shape;  // closed form, for bulk kernels

  /// Affine branch x -> slope*x + offset on `domain` (slope != 0).
  static Branch affine(Interval domain, double slope, double offset);
};

/// Countably many branches accumulating at 0, indexed k = 1, 2, ...; branch
/// domains shrink toward 0 as k grows.
struct CountableFamily {
  std::function<Branch(std::size_t)> branch;

  /// Lebesgue measure of the union of domains of branches k > K.
  std::function<double(std::size_t)> tail_length;

  /// Largest k whose domain lies inside [x, 1]; 0 means every k >= the
  /// current one (x == 0). Optional.
  std::function<std::size_t(double)> last_branch_above;

  /// Sum over k = a..b (b == 0: to infinity) of |g_k(y) - g_k(y2)|, y <= y2.
  /// With `last_branch_above` this lets the transfer operator handle whole
  /// runs of branches inside one grid cell in closed form. Optional.
  std::function<double(std::size_t, std::size_t, double, double)> run_sum;

  /// Bound on how much a pullback can inflate the Lebesgue measure of an
  /// omitted set; used when accumulating tails of iterated preimages.
  double pullback_distortion = 1.0;
};

struct PreimageOptions {
  double eps_tail = 1e-8;
  std::size_t max_branches = 10000;
  std::size_t component_cap = IntervalSet::kDefaultComponentCap;
};

struct PreimageResult {
  IntervalSet set;
  double tail_bound = 0.0;  // Lebesgue measure possibly missing from `set`
};

struct TransferOptions {
  /// Countable maps: branches k <= explicit_branches are always evaluated
  /// one by one; beyond that, whole runs inside a cell use `run_sum`.
  std::size_t explicit_branches = 512;
  /// Countable maps without `run_sum`: branches beyond this are dropped and
  /// their mass reported as the tail bound.
  std::size_t max_branches = std::size_t{1} << 16;
};

struct TransferResult {
  GridDensity density;
  double tail_bound = 0.0;  // mass possibly lost to omitted branches
};

struct OrbitOptions {
  /// Dither policy: unset means "on for maps whose binary orbits collapse".
  std::optional<bool> dither;
  double dither_amplitude = 0x1p-48;
  std::uint64_t seed = 0x5eed;
};

struct Orbit {
  std::vector<double> points;
  bool degenerate = false;           // hit a degenerate point (e.g. Gauss at 0)
  std::size_t degenerate_step = 0;   // first index of a degenerate point
  bool dithered = false;
};

/// Maps whose single step has a bulk kernel (used by orbit ensembles).
enum class BulkStep { none, logistic, gauss };

/// Piecewise-monotone self-map of [0,1]. Immutable after construction.
class PiecewiseMap {
 public:
  static PiecewiseMap finite(std::string name, std::vector<Branch> branches);
  static PiecewiseMap countable(std::string name, CountableFamily family, RealFn forward);

  /// Piecewise-affine map through the breakpoints (x_i, y_i), x_0 = 0,
  /// x_n = 1, strictly increasing x and no flat segments.
  static PiecewiseMap from_breakpoints(std::string name,
                                       const std::vector<std::pair<double, double>>& points);

  /// Parses a breakpoint table: one `x y` pair per line, `#` comments.
  static PiecewiseMap from_breakpoint_text(std::string name, std::string_view text);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool is_countable() const noexcept { return family_.has_value(); }
  [[nodiscard]] const std::vector<Branch>& branches() const noexcept { return branches_; }
  [[nodiscard]] const CountableFamily& family() const;

  /// phi(x). Junction points use the left branch; Gauss at 0 returns 0.
  [[nodiscard]] double eval(double x) const;

  /// Points the map sends to a conventional value (Gauss: x = 0).
  [[nodiscard]] bool is_degenerate(double x) const noexcept;

  /// Whether double-precision orbits collapse onto 0 (binary shift maps).
  [[nodiscard]] bool collapses_in_binary() const noexcept { return binary_collapse_; }
  [[nodiscard]] GridKind preferred_grid() const noexcept { return preferred_grid_; }
  [[nodiscard]] BulkStep bulk_step() const noexcept { return bulk_step_; }

  /// Whether every branch is affine with a closed-form inverse.
  [[nodiscard]] bool is_piecewise_affine() const noexcept;

  PiecewiseMap&& with_binary_collapse(bool on) &&;
  PiecewiseMap&& with_preferred_grid(GridKind kind) &&;
  PiecewiseMap&& with_degenerate_point(double x) &&;
  PiecewiseMap&& with_bulk_step(BulkStep step) &&;

 private:
  std::string name_;
  std::vector<Branch> branches_;
  std::optional<CountableFamily> family_;
  RealFn forward_;
  std::optional<double> degenerate_point_;
  bool binary_collapse_ = false;
  GridKind preferred_grid_ = GridKind::uniform;
  BulkStep bulk_step_ = BulkStep::none;
};

/// Named maps: tent (alias baker), gauss, doubling, halving, logistic.
PiecewiseMap builtin_map(std::string_view name);

/// [x0, phi x0, ..., phi^{n-1} x0]. Throws DomainError unless x0 in [0,1]
/// and n >= 1.
Orbit orbit(const PiecewiseMap& map, double x0, std::size_t n, const OrbitOptions& opts = {});

/// Streaming orbit with the same dither policy as `orbit`.
class OrbitCursor {
 public:
  OrbitCursor(const PiecewiseMap& map, double x0, const OrbitOptions& opts = {});

  [[nodiscard]] double value() const noexcept { return x_; }
  [[nodiscard]] bool dithered() const noexcept { return dithered_; }
  void advance();

 private:
  const PiecewiseMap* map_;
  double x_;
  bool dithered_;
  double amplitude_;
  Rng rng_;
};

/// phi^{-1}(A) with the Lebesgue measure of omitted countable branches.
PreimageResult preimage(const PiecewiseMap& map, const IntervalSet& set,
                        const PreimageOptions& opts = {});

/// phi^{-k}(A). The tail bound accumulates per-step tails, inflating earlier
/// ones by the family's pullback distortion.
PreimageResult iterated_preimage(const PiecewiseMap& map, const IntervalSet& set, std::size_t k,
                                 const PreimageOptions& opts = {});

/// Perron-Frobenius action on a piecewise-constant density. Cell masses are
/// computed exactly from branch inverses: mass_j = sum_i |F(g_i(y_{j+1})) -
/// F(g_i(y_j))| with F the cumulative of `rho`, so total mass is conserved
/// up to rounding and omitted branches.
TransferResult transfer_apply(const PiecewiseMap& map, const GridDensity& rho,
                              const TransferOptions& opts = {});

}  // namespace imf
