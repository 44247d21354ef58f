#include "imf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "imf/error.hpp"
#include "imf/rng.hpp"
#include "imf/special.hpp"

namespace imf {

Branch Branch::affine(Interval domain, double slope, double offset) {
  if (slope == 0.0 || !std::isfinite(slope)) throw DomainError("affine branch needs a finite nonzero slope");
  const double f_lo = slope * domain.lo + offset;
  const double f_hi = slope * domain.hi + offset;
  const kernels::InverseSpec spec{kernels::InverseSpec::Kind::affine, 1.0 / slope, -offset / slope};
  Branch b;
  b.domain = domain;
  b.image = {std::min(f_lo, f_hi), std::max(f_lo, f_hi)};
  b.increasing = slope > 0.0;
  b.forward = [slope, offset](double x) { return slope * x + offset; };
  b.inverse = [spec](double y) { return std::fma(spec.a, y, spec.b); };
  b.inverse_derivative = [s = std::abs(1.0 / slope)](double) { return s; };
  b.shape = spec;
  return b;
}

PiecewiseMap PiecewiseMap::finite(std::string name, std::vector<Branch> branches) {
  if (branches.empty()) throw DomainError("map '" + name + "' has no branches");
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.domain.lo < b.domain.lo; });
  double cursor = 0.0;
  for (const auto& b : branches) {
    if (std::abs(b.domain.lo - cursor) > 1e-12) {
      throw DomainError("branch domains of '" + name + "' do not partition [0,1]");
    }
    cursor = b.domain.hi;
  }
  if (std::abs(cursor - 1.0) > 1e-12) {
    throw DomainError("branch domains of '" + name + "' do not reach 1");
  }
  PiecewiseMap m;
  m.name_ = std::move(name);
  m.branches_ = std::move(branches);
  return m;
}

PiecewiseMap PiecewiseMap::countable(std::string name, CountableFamily family, RealFn forward) {
  if (!family.branch || !family.tail_length || !forward) {
    throw DomainError("countable map '" + name + "' needs branch, tail_length and forward");
  }
  PiecewiseMap m;
  m.name_ = std::move(name);
  m.family_ = std::move(family);
  m.forward_ = std::move(forward);
  return m;
}

PiecewiseMap PiecewiseMap::from_breakpoints(std::string name,
                                            const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw DomainError("breakpoint table needs at least two rows");
  if (points.front().first != 0.0 || points.back().first != 1.0) {
    throw DomainError("breakpoint table must start at x = 0 and end at x = 1");
  }
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto [x0, y0] = points[i];
    const auto [x1, y1] = points[i + 1];
    for (double y : {y0, y1}) {
      if (!(y >= 0.0 && y <= 1.0)) throw DomainError("breakpoint value outside [0,1]");
    }
    if (!(x1 > x0)) throw DomainError("breakpoint x values must be strictly increasing");
    if (y1 == y0) throw DomainError("breakpoint table has a flat (non-invertible) segment");
    const double slope = (y1 - y0) / (x1 - x0);
    branches.push_back(Branch::affine({x0, x1}, slope, y0 - slope * x0));
  }
  return finite(std::move(name), std::move(branches));
}

PiecewiseMap PiecewiseMap::from_breakpoint_text(std::string name, std::string_view text) {
  std::vector<std::pair<double, double>> points;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double x = 0.0;
    double y = 0.0;
    if (!(row >> x >> y)) {
      throw DomainError("breakpoint table line " + std::to_string(lineno) + " is not 'x y'");
    }
    points.emplace_back(x, y);
  }
  return from_breakpoints(std::move(name), points);
}

const CountableFamily& PiecewiseMap::family() const {
  if (!family_) throw DomainError("map '" + name_ + "' has finitely many branches");
  return *family_;
}

double PiecewiseMap::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("map argument outside [0,1]");
  if (forward_) return std::clamp(forward_(x), 0.0, 1.0);
  for (const auto& b : branches_) {
    if (x >= b.domain.lo && x <= b.domain.hi) return std::clamp(b.forward(x), 0.0, 1.0);
  }
  return std::clamp(branches_.back().forward(x), 0.0, 1.0);
}

bool PiecewiseMap::is_degenerate(double x) const noexcept {
  return degenerate_point_ && x == *degenerate_point_;
}

PiecewiseMap&& PiecewiseMap::with_binary_collapse(bool on) && {
  binary_collapse_ = on;
  return std::move(*this);
}

PiecewiseMap&& PiecewiseMap::with_preferred_grid(GridKind kind) && {
  preferred_grid_ = kind;
  return std::move(*this);
}

PiecewiseMap&& PiecewiseMap::with_bulk_step(BulkStep step) && {
  bulk_step_ = step;
  return std::move(*this);
}

bool PiecewiseMap::is_piecewise_affine() const noexcept {
  if (family_) return false;
  return std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) {
    return b.shape && b.shape->kind == kernels::InverseSpec::Kind::affine;
  });
}

PiecewiseMap&& PiecewiseMap::with_degenerate_point(double x) && {
  degenerate_point_ = x;
  return std::move(*this);
}

namespace {

Branch logistic_branch(bool left) {
  const double sign = left ? -1.0 : 1.0;
  const kernels::InverseSpec spec{kernels::InverseSpec::Kind::sqrt_branch, 0.5, 0.5 * sign};
  Branch b;
  b.domain = left ? Interval{0.0, 0.5} : Interval{0.5, 1.0};
  b.image = {0.0, 1.0};
  b.increasing = left;
  b.forward = [](double x) { return 4.0 * x * (1.0 - x); };
  b.inverse = [spec](double y) { return std::fma(spec.b, std::sqrt(1.0 - y), spec.a); };
  b.inverse_derivative = [](double y) { return 0.25 / std::sqrt(1.0 - y); };
  b.shape = spec;
  return b;
}

Branch gauss_branch(std::size_t k) {
  const double kd = static_cast<double>(k);
  Branch b;
  b.domain = {1.0 / (kd + 1.0), 1.0 / kd};
  b.image = {0.0, 1.0};
  b.increasing = false;
  b.forward = [kd](double x) { return 1.0 / x - kd; };
  b.inverse = [kd](double y) { return 1.0 / (y + kd); };
  b.inverse_derivative = [kd](double y) { return 1.0 / ((y + kd) * (y + kd)); };
  b.shape = kernels::InverseSpec{kernels::InverseSpec::Kind::reciprocal, 1.0, kd};
  return b;
}

PiecewiseMap gauss_map() {
  CountableFamily fam;
  fam.branch = gauss_branch;
  fam.tail_length = [](std::size_t K) { return 1.0 / (static_cast<double>(K) + 1.0); };
  fam.last_branch_above = [](double x) -> std::size_t {
    if (!(x > 0.0)) return 0;
    // largest k with 1/(k+1) >= x
    auto k = static_cast<std::size_t>(std::floor(1.0 / x));
    k = k > 0 ? k - 1 : 0;
    while (k > 0 && 1.0 / (static_cast<double>(k) + 1.0) < x) --k;
    while (1.0 / (static_cast<double>(k) + 2.0) >= x) ++k;
    return k;
  };
  fam.run_sum = [](std::size_t a, std::size_t b, double y, double y2) {
    return reciprocal_run_sum(static_cast<double>(a), static_cast<double>(b), y, y2);
  };
  // Lebesgue(phi^{-m} E) <= 2 ln2 * Gauss(E) <= 2 Lebesgue(E) for every m,
  // since the Gauss measure is invariant and its density lies in [1/(2ln2), 1/ln2].
  fam.pullback_distortion = 2.0;
  auto forward = [](double x) {
    if (x == 0.0) return 0.0;
    const double r = 1.0 / x;
    return r - std::floor(r);
  };
  return PiecewiseMap::countable("gauss", std::move(fam), forward)
      .with_degenerate_point(0.0)
      .with_bulk_step(BulkStep::gauss);
}

}  // namespace

PiecewiseMap builtin_map(std::string_view name) {
  if (name == "tent" || name == "baker") {
    return PiecewiseMap::finite("tent", {Branch::affine({0.0, 0.5}, 2.0, 0.0),
                                         Branch::affine({0.5, 1.0}, -2.0, 2.0)})
        .with_binary_collapse(true);
  }
  if (name == "doubling") {
    return PiecewiseMap::finite("doubling", {Branch::affine({0.0, 0.5}, 2.0, 0.0),
                                             Branch::affine({0.5, 1.0}, 2.0, -1.0)})
        .with_binary_collapse(true);
  }
  if (name == "halving") {
    return PiecewiseMap::finite("halving", {Branch::affine({0.0, 1.0}, 0.5, 0.0)});
  }
  if (name == "logistic") {
    return PiecewiseMap::finite("logistic", {logistic_branch(true), logistic_branch(false)})
        .with_preferred_grid(GridKind::cosine)
        .with_bulk_step(BulkStep::logistic);
  }
  if (name == "gauss") return gauss_map();
  throw DomainError("unknown map '" + std::string(name) +
                    "' (expected tent, baker, gauss, doubling, halving, logistic)");
}

OrbitCursor::OrbitCursor(const PiecewiseMap& map, double x0, const OrbitOptions& opts)
    : map_(&map),
      x_(x0),
      dithered_(opts.dither.value_or(map.collapses_in_binary())),
      amplitude_(opts.dither_amplitude),
      rng_(opts.seed) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("orbit start outside [0,1]");
}

void OrbitCursor::advance() {
  x_ = map_->eval(x_);
  if (dithered_) x_ = std::min(1.0, x_ + amplitude_ * rng_.uniform());
}

Orbit orbit(const PiecewiseMap& map, double x0, std::size_t n, const OrbitOptions& opts) {
  if (n == 0) throw DomainError("orbit length must be at least 1");
  OrbitCursor cur(map, x0, opts);
  Orbit out;
  out.dithered = cur.dithered();
  out.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = cur.value();
    out.points.push_back(x);
    if (!out.degenerate && map.is_degenerate(x)) {
      out.degenerate = true;
      out.degenerate_step = k;
    }
    if (k + 1 < n) cur.advance();
  }
  return out;
}

namespace {

void append_branch_preimage(const Branch& b, const IntervalSet& set, std::vector<Interval>& raw) {
  const auto& parts = set.components();
  const std::size_t n = parts.size();
  // Decreasing branches reverse order; walking backwards keeps `raw` sorted.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = parts[b.increasing ? i : n - 1 - i];
    const double lo = std::max(iv.lo, b.image.lo);
    const double hi = std::min(iv.hi, b.image.hi);
    if (!(hi > lo)) continue;
    double a = b.inverse(lo);
    double c = b.inverse(hi);
    if (!b.increasing) std::swap(a, c);
    a = std::clamp(a, b.domain.lo, b.domain.hi);
    c = std::clamp(c, b.domain.lo, b.domain.hi);
    if (c > a) raw.push_back({a, c});
  }
}

std::size_t count_overlaps(const Branch& b, const IntervalSet& set) {
  std::size_t n = 0;
  for (const auto& iv : set.components()) {
    if (std::min(iv.hi, b.image.hi) > std::max(iv.lo, b.image.lo)) ++n;
  }
  return n;
}

void check_capacity(std::size_t raw, std::size_t branches, std::size_t cap) {
  // Preimages under different branches can only merge at branch junctions.
  if (raw > cap + branches) {
    throw CapacityError("preimage would have at least " + std::to_string(raw - branches) +
                        " components, above the cap of " + std::to_string(cap) +
                        "; use the transfer-operator engine instead");
  }
}

}  // namespace

PreimageResult preimage(const PiecewiseMap& map, const IntervalSet& set,
                        const PreimageOptions& opts) {
  std::vector<Interval> raw;
  if (!map.is_countable()) {
    std::size_t estimate = 0;
    for (const auto& b : map.branches()) estimate += count_overlaps(b, set);
    check_capacity(estimate, map.branches().size(), opts.component_cap);
    raw.reserve(estimate);
    for (const auto& b : map.branches()) append_branch_preimage(b, set, raw);
    return {IntervalSet::normalize(std::move(raw), opts.component_cap), 0.0};
  }

  const auto& fam = map.family();
  std::size_t K = std::max<std::size_t>(opts.max_branches, 1);
  if (fam.tail_length(K) <= opts.eps_tail) {
    std::size_t lo = 1;
    std::size_t hi = K;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (fam.tail_length(mid) <= opts.eps_tail) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    K = lo;
  }
  if (set.empty()) return {IntervalSet{}, 0.0};
  check_capacity(K * set.size(), K, opts.component_cap);
  raw.reserve(K * set.size());
  for (std::size_t k = 1; k <= K; ++k) append_branch_preimage(fam.branch(k), set, raw);
  return {IntervalSet::normalize(std::move(raw), opts.component_cap), fam.tail_length(K)};
}

PreimageResult iterated_preimage(const PiecewiseMap& map, const IntervalSet& set, std::size_t k,
                                 const PreimageOptions& opts) {
  PreimageResult cur{set, 0.0};
  const double distortion = map.is_countable() ? map.family().pullback_distortion : 1.0;
  double earlier = 0.0;
  double last = 0.0;
  for (std::size_t step = 0; step < k; ++step) {
    auto next = preimage(map, cur.set, opts);
    earlier += last;
    last = next.tail_bound;
    cur.set = std::move(next.set);
  }
  cur.tail_bound = last + distortion * earlier;
  return cur;
}

TransferResult transfer_apply(const PiecewiseMap& map, const GridDensity& rho,
                              const TransferOptions& opts) {
  const std::size_t n = rho.cells();
  const auto& nodes = rho.nodes();
  const auto& kt = kernels::active();
  std::vector<double> mass(n, 0.0);
  std::vector<double> clamped(n + 1);
  std::vector<double> pre(n + 1);
  std::vector<double> cum(n + 1);

  auto explicit_branch = [&](const Branch& b) {
    const double* y = nodes.data();
    if (b.image.lo > 0.0 || b.image.hi < 1.0) {
      for (std::size_t j = 0; j <= n; ++j) clamped[j] = std::clamp(nodes[j], b.image.lo, b.image.hi);
      y = clamped.data();
    }
    if (b.shape) {
      kt.apply_inverse(*b.shape, y, pre.data(), n + 1);
    } else {
      for (std::size_t j = 0; j <= n; ++j) pre[j] = b.inverse(y[j]);
    }
    rho.cumulative_at(pre, cum);
    kt.accumulate_abs_diff(cum.data(), mass.data(), n);
  };

  double tail = 0.0;
  if (!map.is_countable()) {
    for (const auto& b : map.branches()) explicit_branch(b);
  } else {
    const auto& fam = map.family();
    const bool runs = static_cast<bool>(fam.run_sum) && static_cast<bool>(fam.last_branch_above);
    const auto& values = rho.values();
    std::size_t k = 1;
    while (true) {
      if (!runs && k > opts.max_branches) {
        tail = rho.cumulative_at(fam.branch(k).domain.hi);
        break;
      }
      const Branch b = fam.branch(k);
      if (runs && k > opts.explicit_branches) {
        const std::size_t cell = rho.locate(b.domain.lo);
        if (cell == rho.locate_upper(b.domain.hi)) {
          const std::size_t last = fam.last_branch_above(nodes[cell]);
          const double level = values[cell];
          if (level != 0.0) {
            for (std::size_t j = 0; j < n; ++j) {
              mass[j] += level * fam.run_sum(k, last, nodes[j], nodes[j + 1]);
            }
          }
          if (last == 0) break;
          k = last + 1;
          continue;
        }
      }
      explicit_branch(b);
      ++k;
    }
  }

  for (double& m : mass) {
    if (!std::isfinite(m)) throw NumericError("transfer operator produced a non-finite mass");
    m = std::max(m, 0.0);
  }
  return {GridDensity::from_cell_masses(rho.kind(), mass), tail};
}

}  // namespace imf
