#include "imf/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "imf/error.hpp"
#include "imf/kernels/kernels.hpp"
#include "imf/parallel.hpp"
#include "imf/rng.hpp"

namespace imf {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();
constexpr std::size_t kBlock = 4096;

Provenance make_provenance(const PiecewiseMap& map, const DensityMeasure& mu,
                           const IntervalSet& set, Engine engine, const EngineOptions& opts) {
  Provenance p;
  p.map = map.name();
  p.measure = mu.name;
  p.set = set.to_string();
  p.engine = engine;
  if (engine == Engine::transfer) p.grid_cells = opts.grid_cells;
  if (engine == Engine::montecarlo) {
    p.seed = opts.seed;
    p.samples = opts.samples;
  }
  return p;
}

// Endpoints as unevaluated sums hi + lo (double-double). Affine inverse
// branches then act without rounding for dozens of steps, where plain doubles
// pick up a bias of ~2^-54 per component and step.
struct Endpoint {
  double hi = 0.0;
  double lo = 0.0;
};

struct WideInterval {
  Endpoint a, b;
};

Endpoint renormalize(double h, double l) {
  const double s = h + l;
  return {s, l - (s - h)};
}

Endpoint affine_image(double slope, double offset, Endpoint y) {
  const double p = slope * y.hi;
  const double pe = std::fma(slope, y.hi, -p);
  const double s = p + offset;
  const double bb = s - p;
  const double se = (p - (s - bb)) + (offset - bb);
  return renormalize(s, pe + se + slope * y.lo);
}

bool less(Endpoint x, double d) { return x.hi < d || (x.hi == d && x.lo < 0.0); }
bool greater(Endpoint x, double d) { return x.hi > d || (x.hi == d && x.lo > 0.0); }
bool less(Endpoint x, Endpoint y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); }

Endpoint clamp_to(Endpoint x, double lo, double hi) {
  if (less(x, lo)) return {lo, 0.0};
  if (greater(x, hi)) return {hi, 0.0};
  return x;
}

std::vector<WideInterval> widen(const IntervalSet& set) {
  std::vector<WideInterval> out;
  out.reserve(set.size());
  for (const auto& iv : set.components()) out.push_back({{iv.lo, 0.0}, {iv.hi, 0.0}});
  return out;
}

// Writes the preimage into `raw`, reusing its storage.
void wide_preimage(const PiecewiseMap& map, const std::vector<WideInterval>& set, std::size_t cap,
                   std::vector<WideInterval>& raw) {
  raw.clear();
  const std::size_t n = set.size();
  raw.reserve(std::min(cap + 1, n * map.branches().size()));
  for (const auto& br : map.branches()) {
    const auto& spec = *br.shape;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& iv = set[br.increasing ? i : n - 1 - i];
      const Endpoint lo = less(iv.a, br.image.lo) ? Endpoint{br.image.lo, 0.0} : iv.a;
      const Endpoint hi = greater(iv.b, br.image.hi) ? Endpoint{br.image.hi, 0.0} : iv.b;
      if (!less(lo, hi)) continue;
      Endpoint x = clamp_to(affine_image(spec.a, spec.b, lo), br.domain.lo, br.domain.hi);
      Endpoint y = clamp_to(affine_image(spec.a, spec.b, hi), br.domain.lo, br.domain.hi);
      if (!br.increasing) std::swap(x, y);
      if (!less(x, y)) continue;
      if (!raw.empty() && !less(raw.back().b, x)) {
        if (less(raw.back().b, y)) raw.back().b = y;
      } else {
        raw.push_back({x, y});
      }
    }
    if (raw.size() > cap) {
      throw CapacityError("preimage has more than " + std::to_string(cap) +
                          " components; use the transfer-operator engine instead");
    }
  }
}

double wide_measure(const DensityMeasure& mu, const std::vector<WideInterval>& set) {
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& iv : set) {
    double v = 0.0;
    if (mu.constant_density) {
      v = *mu.constant_density * ((iv.b.hi - iv.a.hi) + (iv.b.lo - iv.a.lo));
    } else if (mu.cdf) {
      // First-order correction for the low parts.
      v = ((*mu.cdf)(iv.b.hi) - (*mu.cdf)(iv.a.hi)) +
          (mu.density(iv.b.hi) * iv.b.lo - mu.density(iv.a.hi) * iv.a.lo);
    } else {
      v = adaptive_integrate(mu.density, iv.a.hi, iv.b.hi, 1e-10);
    }
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return std::clamp(sum + carry, 0.0, mu.total_mass);
}

std::vector<PullbackSequence> run_geometric_affine(const PiecewiseMap& map,
                                                   const DensityMeasure& mu,
                                                   const std::vector<IntervalSet>& sets,
                                                   std::size_t n, const EngineOptions& opts) {
  std::vector<PullbackSequence> out;
  for (const auto& set : sets) {
    PullbackSequence seq;
    seq.total_mass = mu.total_mass;
    seq.values.resize(n);
    seq.error_bounds.resize(n);
    auto cur = widen(set);
    std::vector<WideInterval> next;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        wide_preimage(map, cur, opts.preimage.component_cap, next);
        cur.swap(next);
      }
      seq.values[k] = wide_measure(mu, cur);
      seq.error_bounds[k] = 4.0 * kUlp * static_cast<double>(cur.size() + 1) * mu.total_mass;
    }
    seq.provenance = make_provenance(map, mu, set, Engine::geometric, opts);
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<PullbackSequence> run_geometric(const PiecewiseMap& map, const DensityMeasure& mu,
                                            const std::vector<IntervalSet>& sets, std::size_t n,
                                            const EngineOptions& opts) {
  if (map.is_piecewise_affine()) return run_geometric_affine(map, mu, sets, n, opts);
  if (map.is_countable() && opts.preimage.eps_tail <= 0.0) {
    throw DomainError("geometric engine on a countable map needs a positive tail tolerance");
  }
  const double distortion = map.is_countable() ? map.family().pullback_distortion : 1.0;
  std::vector<PullbackSequence> out;
  for (const auto& set : sets) {
    PullbackSequence seq;
    seq.total_mass = mu.total_mass;
    seq.values.resize(n);
    seq.error_bounds.resize(n);
    IntervalSet cur = set;
    double earlier = 0.0;
    double last = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        auto next = preimage(map, cur, opts.preimage);
        earlier += last;
        last = next.tail_bound;
        cur = std::move(next.set);
      }
      seq.values[k] = measure_of(mu, cur);
      const double tail = last + distortion * earlier;
      // Endpoint rounding: each component boundary is off by a few ulps.
      const double rounding = 4.0 * kUlp * static_cast<double>(cur.size() + 1) * mu.total_mass;
      seq.error_bounds[k] = mu.density_bound * tail + rounding;
    }
    seq.provenance = make_provenance(map, mu, set, Engine::geometric, opts);
    out.push_back(std::move(seq));
  }
  return out;
}

struct TransferRun {
  std::vector<std::vector<double>> values;  // [set][k]
  std::vector<double> bounds;               // [k], tails and skipped steps
};

TransferRun transfer_run(const PiecewiseMap& map, const DensityMeasure& mu,
                         const std::vector<IntervalSet>& sets, std::size_t n, std::size_t cells,
                         const EngineOptions& opts) {
  const GridKind kind = opts.grid_kind.value_or(map.preferred_grid());
  GridDensity rho = discretize(mu, kind, cells);
  TransferRun run;
  run.values.assign(sets.size(), std::vector<double>(n, 0.0));
  run.bounds.assign(n, 0.0);
  for (std::size_t s = 0; s < sets.size(); ++s) run.values[s][0] = measure_of(mu, sets[s]);
  // Rounding: once for discretizing mu and summing cells over a set, then a
  // few relative ulps of mass per transfer step.
  double tails = 4.0 * kUlp * static_cast<double>(cells) * mu.total_mass;
  double skipped = 0.0;
  double delta = 0.0;
  bool stationary = false;
  // Step-to-step L1 changes bottom out at a rounding floor of a few ulps per
  // cell, so the threshold never goes below that floor.
  const double floor = 32.0 * kUlp * static_cast<double>(cells);
  const double tol = std::max(opts.stationarity_tol, floor) * std::max(mu.total_mass, 1e-300);
  for (std::size_t k = 1; k < n; ++k) {
    if (!stationary) {
      auto res = transfer_apply(map, rho, opts.transfer);
      tails += res.tail_bound + 8.0 * kUlp * mu.total_mass;
      delta = res.density.l1_distance(rho);
      rho = std::move(res.density);
      stationary = delta <= tol;
    } else {
      skipped += delta;
    }
    for (std::size_t s = 0; s < sets.size(); ++s) run.values[s][k] = rho.integrate_over(sets[s]);
    run.bounds[k] = tails + skipped;
  }
  return run;
}

std::vector<PullbackSequence> run_transfer(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const std::vector<IntervalSet>& sets, std::size_t n,
                                           const EngineOptions& opts) {
  if (opts.grid_cells < 2) throw DomainError("transfer engine needs at least 2 grid cells");
  const auto fine = transfer_run(map, mu, sets, n, opts.grid_cells, opts);
  std::optional<TransferRun> coarse;
  if (opts.estimate_grid_error && opts.grid_cells >= 4) {
    coarse = transfer_run(map, mu, sets, n, opts.grid_cells / 2, opts);
  }
  std::vector<PullbackSequence> out;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    PullbackSequence seq;
    seq.total_mass = mu.total_mass;
    seq.values = fine.values[s];
    seq.error_bounds = fine.bounds;
    for (std::size_t k = 0; k < n; ++k) {
      if (coarse) seq.error_bounds[k] += std::abs(fine.values[s][k] - coarse->values[s][k]);
      seq.values[k] = std::clamp(seq.values[k], 0.0, mu.total_mass);
    }
    seq.provenance = make_provenance(map, mu, sets[s], Engine::transfer, opts);
    out.push_back(std::move(seq));
  }
  return out;
}

void step_block(const PiecewiseMap& map, std::span<double> xs, bool dither, double amplitude,
                Rng& rng) {
  const auto& table = kernels::active();
  switch (map.bulk_step()) {
    case BulkStep::logistic:
      table.logistic_steps(xs.data(), xs.size(), 1);
      return;
    case BulkStep::gauss:
      table.gauss_steps(xs.data(), xs.size(), 1);
      return;
    case BulkStep::none:
      break;
  }
  for (auto& x : xs) {
    x = map.eval(x);
    if (dither) x = std::min(1.0, x + amplitude * rng.uniform());
  }
}

std::vector<PullbackSequence> run_montecarlo(const PiecewiseMap& map, const DensityMeasure& mu,
                                             const std::vector<IntervalSet>& sets, std::size_t n,
                                             const EngineOptions& opts) {
  if (opts.samples == 0) throw DomainError("Monte Carlo engine needs at least one sample");
  const std::size_t blocks = (opts.samples + kBlock - 1) / kBlock;
  const bool dither = map.collapses_in_binary();
  const double amplitude = OrbitOptions{}.dither_amplitude;
  // hits[block][set * n + k]
  std::vector<std::vector<std::uint32_t>> hits(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng(Rng::derive(opts.seed, b));
    const std::size_t count = std::min(kBlock, opts.samples - b * kBlock);
    std::vector<double> xs(count);
    for (auto& x : xs) x = sample(mu, rng);
    auto& h = hits[b];
    h.assign(sets.size() * n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < sets.size(); ++s) {
        std::uint32_t c = 0;
        for (double x : xs) c += sets[s].contains(x) ? 1u : 0u;
        h[s * n + k] = c;
      }
      if (k + 1 < n) step_block(map, xs, dither, amplitude, rng);
    }
  });
  const double total = static_cast<double>(opts.samples);
  std::vector<PullbackSequence> out;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    PullbackSequence seq;
    seq.total_mass = mu.total_mass;
    seq.values.resize(n);
    seq.error_bounds.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t c = 0;
      for (const auto& h : hits) c += h[s * n + k];
      const double p = static_cast<double>(c) / total;
      // The 1/N floor keeps the bound honest when no sample lands in A.
      const double var = std::max(p * (1.0 - p), 1.0 / total);
      seq.values[k] = mu.total_mass * p;
      seq.error_bounds[k] = mu.total_mass * 3.0 * std::sqrt(var / total);
    }
    seq.provenance = make_provenance(map, mu, sets[s], Engine::montecarlo, opts);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace

std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::geometric:
      return "geometric";
    case Engine::transfer:
      return "transfer";
    case Engine::montecarlo:
      return "montecarlo";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  if (name == "geometric") return Engine::geometric;
  if (name == "transfer") return Engine::transfer;
  if (name == "montecarlo") return Engine::montecarlo;
  throw DomainError("unknown engine '" + std::string(name) +
                    "' (expected geometric, transfer, montecarlo)");
}

Engine default_engine(const PiecewiseMap& map) noexcept {
  return map.is_piecewise_affine() ? Engine::geometric : Engine::transfer;
}

double PullbackSequence::max_error() const noexcept {
  double m = 0.0;
  for (double e : error_bounds) m = std::max(m, e);
  return m;
}

PullbackSequence PullbackSequence::from_values(std::vector<double> values, double total_mass) {
  PullbackSequence seq;
  seq.error_bounds.assign(values.size(), 0.0);
  seq.values = std::move(values);
  seq.total_mass = total_mass;
  seq.provenance.map = "fixture";
  return seq;
}

std::vector<PullbackSequence> pullback_sequences(const PiecewiseMap& map,
                                                 const DensityMeasure& mu,
                                                 const std::vector<IntervalSet>& sets,
                                                 std::size_t n, const EngineOptions& opts) {
  if (n == 0) throw DomainError("pullback sequence length must be at least 1");
  switch (opts.engine.value_or(default_engine(map))) {
    case Engine::geometric:
      return run_geometric(map, mu, sets, n, opts);
    case Engine::transfer:
      return run_transfer(map, mu, sets, n, opts);
    case Engine::montecarlo:
      return run_montecarlo(map, mu, sets, n, opts);
  }
  throw DomainError("unknown engine");
}

PullbackSequence pullback_sequence(const PiecewiseMap& map, const DensityMeasure& mu,
                                   const IntervalSet& set, std::size_t n,
                                   const EngineOptions& opts) {
  return std::move(pullback_sequences(map, mu, {set}, n, opts).front());
}

CesaroDensity cesaro_density(const PiecewiseMap& map, const DensityMeasure& mu, std::size_t n,
                             const EngineOptions& opts) {
  if (n == 0) throw DomainError("Cesaro average needs n >= 1");
  const GridKind kind = opts.grid_kind.value_or(map.preferred_grid());
  GridDensity rho = discretize(mu, kind, opts.grid_cells);
  std::vector<double> sum = rho.cell_masses();
  double tails = 0.0;
  double skipped = 0.0;
  double delta = 0.0;
  bool stationary = false;
  // Step-to-step L1 changes bottom out at a rounding floor of a few ulps per
  // cell, so the threshold never goes below that floor.
  const double floor = 32.0 * kUlp * static_cast<double>(opts.grid_cells);
  const double tol = std::max(opts.stationarity_tol, floor) * std::max(mu.total_mass, 1e-300);
  for (std::size_t k = 1; k < n; ++k) {
    if (!stationary) {
      auto res = transfer_apply(map, rho, opts.transfer);
      tails += res.tail_bound;
      delta = res.density.l1_distance(rho);
      rho = std::move(res.density);
      stationary = delta <= tol;
      const auto& m = rho.cell_masses();
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += m[c];
    } else {
      // Every remaining iterate reuses rho; add them in one go.
      const double remaining = static_cast<double>(n - k);
      const auto& m = rho.cell_masses();
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += remaining * m[c];
      skipped = 0.5 * remaining * (remaining + 1.0) * delta;
      break;
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : sum) v *= inv;
  CesaroDensity out{GridDensity::from_cell_masses(kind, sum), 0.0};
  out.error_bound = (tails + skipped) * inv;
  return out;
}

}  // namespace imf
