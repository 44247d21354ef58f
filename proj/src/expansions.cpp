#include "imf/expansions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "imf/error.hpp"
#include "imf/rng.hpp"

namespace imf {

namespace {

__extension__ typedef unsigned __int128 u128;

double tent(double x) { return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x; }

// q with x = m / 2^q, m odd (q = 0 for x in {0, 1}).
int dyadic_exponent(double x) {
  if (x == 0.0 || x == 1.0) return 0;
  int e = 0;
  const double frac = std::frexp(x, &e);  // x = frac * 2^e, frac in [0.5, 1)
  auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  int q = 53 - e;
  while ((mant & 1u) == 0 && q > 0) {
    mant >>= 1;
    --q;
  }
  return q;
}

// e with s = 2^-e, if s is such a power.
std::optional<int> weight_exponent(double s) {
  if (!(s > 0.0)) return std::nullopt;
  int e = 0;
  const double frac = std::frexp(s, &e);
  if (frac != 0.5) return std::nullopt;
  return 1 - e;
}

std::optional<double> exact_sum(double x, const SeriesSpec& spec) {
  const auto e = weight_exponent(spec.weight);
  if (!e) return std::nullopt;
  const int q = dyadic_exponent(x);
  if (q > 62) return std::nullopt;
  // Numerators y_n over 2^q; the orbit reaches 0 after at most q + 1 steps.
  const std::uint64_t one = std::uint64_t{1} << q;
  auto y = static_cast<std::uint64_t>(std::ldexp(x, q));
  std::vector<std::uint64_t> ys;
  for (std::size_t n = 0; n < spec.terms && y != 0; ++n) {
    ys.push_back(y);
    y = 2 * y <= one ? 2 * y : 2 * one - 2 * y;
  }
  if (ys.empty()) return 0.0;
  const std::size_t last = ys.size() - 1;
  const int bits = spec.power * q + *e * static_cast<int>(last) + 8;
  if (bits > 126) return std::nullopt;
  // sum_n y_n^p 2^{e(last - n)} over 2^{pq + e last}
  u128 num = 0;
  for (std::size_t n = 0; n <= last; ++n) {
    u128 term = ys[n];
    if (spec.power == 2) term *= ys[n];
    num += term << (*e * static_cast<int>(last - n));
  }
  const int shift = spec.power * q + *e * static_cast<int>(last);
  // Round once: take the top 64 bits, then one conversion to double.
  int drop = 0;
  while ((num >> drop) > u128{0xffffffffffffffffULL}) ++drop;
  auto top = static_cast<std::uint64_t>(num >> drop);
  const bool sticky = drop > 0 && (num & ((u128{1} << drop) - 1)) != 0;
  if (sticky) top |= 1u;  // keeps the 64->53 bit rounding correct
  return std::ldexp(static_cast<double>(top), drop - shift);
}

void check_series(double x, double s, int p) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("series argument outside [0,1]");
  if (!(std::abs(s) < 1.0)) throw DomainError("series weight must satisfy |s| < 1");
  if (p != 1 && p != 2) throw DomainError("series power must be 1 or 2");
}

}  // namespace

SeriesValue tent_series(double x, const SeriesSpec& spec) {
  check_series(x, spec.weight, spec.power);
  const double as = std::abs(spec.weight);
  SeriesValue out;
  out.truncation_bound = std::pow(as, static_cast<double>(spec.terms)) / (1.0 - as);
  if (const auto v = exact_sum(x, spec)) {
    out.value = *v;
    out.exact = true;
    return out;
  }
  double sum = 0.0;
  double carry = 0.0;
  double power = 1.0;
  double y = x;
  for (std::size_t n = 0; n < spec.terms; ++n) {
    const double v = power * (spec.power == 2 ? y * y : y);
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    power *= spec.weight;
    y = tent(y);
  }
  out.value = sum + carry;
  return out;
}

SeriesValue general_decomposition(double x, double s, std::size_t terms) {
  const auto f1 = tent_series(x, {s, 1, terms});
  const auto f2 = tent_series(x, {s, 2, terms});
  const double a = 2.0 - 4.0 * s;
  const double b = 4.0 * s - 1.0;
  SeriesValue out;
  out.value = a * f1.value + b * f2.value;
  out.truncation_bound = std::abs(a) * f1.truncation_bound + std::abs(b) * f2.truncation_bound;
  out.exact = f1.exact && f2.exact;
  return out;
}

SeriesValue takagi_xi(double x, std::size_t terms) {
  auto v = tent_series(x, {0.5, 1, terms});
  v.truncation_bound = std::ldexp(1.0, 1 - static_cast<int>(terms));
  return v;
}

std::vector<RoughnessRow> roughness_profile(std::size_t levels, std::size_t samples,
                                            std::uint64_t seed) {
  if (levels > 40) throw DomainError("roughness profile supports at most 40 levels");
  Rng rng(seed);
  auto smooth = [](double x) { return 2.0 * x - x * x; };
  std::vector<RoughnessRow> rows;
  for (std::size_t n = 1; n <= levels; ++n) {
    const double h = std::ldexp(1.0, -static_cast<int>(n));
    const std::uint64_t cells = std::uint64_t{1} << n;
    RoughnessRow row;
    row.level = n;
    for (std::size_t i = 0; i <= samples; ++i) {
      const std::uint64_t j = i == 0 ? 0 : rng.next() % cells;
      const double x = static_cast<double>(j) * h;
      const double q = std::abs(takagi_xi(x + h).value - takagi_xi(x).value) / h;
      row.takagi = std::max(row.takagi, q);
      row.smooth = std::max(row.smooth, std::abs(smooth(x + h) - smooth(x)) / h);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace imf
