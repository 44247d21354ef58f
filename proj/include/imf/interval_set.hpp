#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace imf {

/// A closed subinterval [lo, hi] of the unit interval. Endpoints only matter
/// up to Lebesgue-null sets.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const noexcept { return hi > lo ? hi - lo : 0.0; }
  [[nodiscard]] bool empty() const noexcept { return !(hi > lo); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of disjoint subintervals of [0,1].
///
/// Components are sorted, nonempty, and separated by gaps wider than
/// `kMergeTolerance`. Every constructor normalizes, so an `IntervalSet` value
/// is always canonical.
class IntervalSet {
 public:
  static constexpr double kMergeTolerance = 1e-15;
  static constexpr std::size_t kDefaultComponentCap = std::size_t{1} << 20;

  IntervalSet() = default;

  /// Normalizes `raw`. Throws DomainError for endpoints outside [0,1] or
  /// non-finite values, CapacityError when the result exceeds `cap`.
  static IntervalSet normalize(std::vector<Interval> raw,
                               std::size_t cap = kDefaultComponentCap);

  static IntervalSet unit() { return IntervalSet({{0.0, 1.0}}); }
  static IntervalSet single(double lo, double hi) { return normalize({{lo, hi}}); }

  /// Parses `lo:hi,lo:hi,...`. An empty string is the empty set.
  static IntervalSet parse(std::string_view text);

  [[nodiscard]] const std::vector<Interval>& components() const noexcept { return parts_; }
  [[nodiscard]] std::size_t size() const noexcept { return parts_.size(); }
  [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }

  /// Lebesgue measure.
  [[nodiscard]] double total_length() const noexcept;

  /// Point membership; endpoints count as members.
  [[nodiscard]] bool contains(double x) const noexcept;

  /// Distance from `x` to the nearest component endpoint.
  [[nodiscard]] double boundary_distance(double x) const noexcept;

  [[nodiscard]] IntervalSet intersect(const IntervalSet& other) const;
  [[nodiscard]] IntervalSet unite(const IntervalSet& other,
                                  std::size_t cap = kDefaultComponentCap) const;
  [[nodiscard]] IntervalSet complement() const;

  /// True iff the symmetric difference has length at most `tol`.
  [[nodiscard]] bool approx_eq(const IntervalSet& other, double tol) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  explicit IntervalSet(std::vector<Interval> canonical) : parts_(std::move(canonical)) {}

  std::vector<Interval> parts_;
};

}  // namespace imf
