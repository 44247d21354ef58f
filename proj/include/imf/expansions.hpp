#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace imf {

/// Series sum_{n<N} s^n (phi^n x)^p with phi the tent map.
struct SeriesSpec {
  double weight = 0.25;  // s, |s| < 1
  int power = 1;         // p in {1, 2}
  std::size_t terms = 40;  // N
};

struct SeriesValue {
  double value = 0.0;
  double truncation_bound = 0.0;  // |s|^N / (1 - |s|)
  bool exact = false;  // summed in integer arithmetic, rounded once
};

/// Doubles are dyadic rationals and tent orbits are exact in binary, so the
/// orbit is always exact. When x = p/2^q and s = 2^-e with everything
/// fitting in 127 bits the sum is also formed exactly.
/// Throws DomainError unless x in [0,1], |s| < 1, p in {1,2}.
SeriesValue tent_series(double x, const SeriesSpec& spec);

/// (2 - 4s) F_1(x) + (4s - 1) F_2(x), F_p the tent series with weight s;
/// equals 2x - x^2 for every s up to the combined truncation bound.
SeriesValue general_decomposition(double x, double s, std::size_t terms);

/// xi(x) = sum_{n<N} 2^-n phi^n x, bound 2^{1-N}.
SeriesValue takagi_xi(double x, std::size_t terms = 60);

struct RoughnessRow {
  std::size_t level = 0;
  double takagi = 0.0;  // max |xi(x + 2^-n) - xi(x)| 2^n
  double smooth = 0.0;  // same for 2x - x^2

  bool operator==(const RoughnessRow&) const = default;
};

/// Dyadic difference quotients at levels 1..levels over x = 0 and `samples`
/// seeded points j 2^-n. Throws DomainError for levels > 40.
std::vector<RoughnessRow> roughness_profile(std::size_t levels, std::size_t samples,
                                            std::uint64_t seed = 0x5eed);

}  // namespace imf
