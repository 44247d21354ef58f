#include "imf/interval_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "imf/error.hpp"

namespace imf {

namespace {

void check_endpoint(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("interval endpoint is not finite");
  }
  if (v < 0.0 || v > 1.0) {
    throw DomainError("interval endpoint " + std::to_string(v) + " lies outside [0,1]");
  }
}

double parse_real(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("cannot parse number '" + std::string(s) + "' in set expression");
  }
  return v;
}

}  // namespace

IntervalSet IntervalSet::normalize(std::vector<Interval> raw, std::size_t cap) {
  for (const auto& iv : raw) {
    check_endpoint(iv.lo);
    check_endpoint(iv.hi);
  }
  std::erase_if(raw, [](const Interval& iv) { return iv.empty(); });
  const auto by_lo = [](const Interval& a, const Interval& b) { return a.lo < b.lo; };
  if (!std::is_sorted(raw.begin(), raw.end(), by_lo)) std::sort(raw.begin(), raw.end(), by_lo);

  std::vector<Interval> out;
  out.reserve(raw.size());
  for (const auto& iv : raw) {
    if (!out.empty() && iv.lo <= out.back().hi + kMergeTolerance) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  if (out.size() > cap) {
    throw CapacityError("interval set has " + std::to_string(out.size()) +
                        " components, above the cap of " + std::to_string(cap) +
                        "; use the transfer-operator engine instead");
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::parse(std::string_view text) {
  std::vector<Interval> raw;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw DomainError("set component '" + std::string(item) + "' is not of the form lo:hi");
    }
    const double lo = parse_real(item.substr(0, colon));
    const double hi = parse_real(item.substr(colon + 1));
    if (hi < lo) {
      throw DomainError("set component '" + std::string(item) + "' has hi < lo");
    }
    raw.push_back({lo, hi});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return normalize(std::move(raw));
}

double IntervalSet::total_length() const noexcept {
  // Neumaier summation: sets from iterated preimages have ~1e6 components.
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& iv : parts_) {
    const double v = iv.hi - iv.lo;
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

bool IntervalSet::contains(double x) const noexcept {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x <= it->hi;
}

double IntervalSet::boundary_distance(double x) const noexcept {
  double best = 2.0;
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it != parts_.end()) best = std::min(best, std::abs(it->lo - x));
  if (it != parts_.begin()) {
    --it;
    best = std::min({best, std::abs(it->lo - x), std::abs(it->hi - x)});
  }
  return best;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  const auto& a = parts_;
  const auto& b = other.parts_;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return normalize(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other, std::size_t cap) const {
  std::vector<Interval> raw;
  raw.reserve(parts_.size() + other.parts_.size());
  raw.insert(raw.end(), parts_.begin(), parts_.end());
  raw.insert(raw.end(), other.parts_.begin(), other.parts_.end());
  return normalize(std::move(raw), cap);
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  for (const auto& iv : parts_) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < 1.0) out.push_back({cursor, 1.0});
  return normalize(std::move(out));
}

bool IntervalSet::approx_eq(const IntervalSet& other, double tol) const {
  const double sym = unite(other).total_length() - intersect(other).total_length();
  return sym <= tol;
}

std::string IntervalSet::to_string() const {
  std::string out;
  char buf[64];
  for (const auto& iv : parts_) {
    if (!out.empty()) out += ',';
    std::snprintf(buf, sizeof buf, "%.17g:%.17g", iv.lo, iv.hi);
    out += buf;
  }
  return out;
}

}  // namespace imf
