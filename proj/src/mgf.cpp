#include "imf/mgf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imf/error.hpp"

namespace imf {

namespace {

constexpr double kRounding = 1e-12;

void check_length(const PullbackSequence& seq, std::size_t n) {
  if (n == 0) throw DomainError("sequence length n must be at least 1");
  if (n > seq.size()) {
    throw DomainError("n = " + std::to_string(n) + " exceeds the sequence length " +
                      std::to_string(seq.size()));
  }
}

void check_unit_disc(double lambda, const char* what) {
  if (!(std::abs(lambda) < 1.0)) {
    throw DomainError(std::string(what) + " must satisfy |" + what + "| < 1");
  }
}

// Sequences for A and phi^{-1}A from one engine run. For countable maps the
// preimage misses branches whose domains fill [0, t]; `tail` holds the
// sequence of [0, t], which bounds what those branches would add.
struct ShiftPair {
  PullbackSequence a;
  PullbackSequence b;
  std::vector<double> tail;
};

ShiftPair shift_pair(const PiecewiseMap& map, const DensityMeasure& mu, const IntervalSet& set,
                     std::size_t n, const EngineOptions& opts) {
  const auto pre = preimage(map, set, opts.preimage);
  std::vector<IntervalSet> sets{set, pre.set};
  const bool has_tail = pre.tail_bound > 0.0;
  if (has_tail) sets.push_back(IntervalSet::single(0.0, std::min(pre.tail_bound, 1.0)));
  auto seqs = pullback_sequences(map, mu, sets, n, opts);
  ShiftPair out{std::move(seqs[0]), std::move(seqs[1]), std::vector<double>(n, 0.0)};
  if (has_tail) {
    for (std::size_t k = 0; k < n; ++k) out.tail[k] = seqs[2].values[k] + seqs[2].error_bounds[k];
  }
  return out;
}

// Lagrange weights of the polynomial through (h_i, .) evaluated at 0.
std::vector<double> weights_at_zero(const std::vector<double>& h) {
  std::vector<double> w(h.size(), 1.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i != j) w[j] *= -h[i] / (h[j] - h[i]);
    }
  }
  return w;
}

}  // namespace

double cesaro(const PullbackSequence& seq, std::size_t n) {
  check_length(seq, n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += seq.values[k];
  return sum / static_cast<double>(n);
}

double cesaro_engine_bound(const PullbackSequence& seq, std::size_t n) {
  check_length(seq, n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += seq.error_bounds[k];
  return sum / static_cast<double>(n);
}

MgfValue mgf_partial(const PullbackSequence& seq, double lambda, std::size_t n) {
  check_unit_disc(lambda, "lambda");
  check_length(seq, n);
  MgfValue out;
  double power = 1.0;
  const double a = std::abs(lambda);
  double apower = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.value += power * seq.values[k];
    out.engine_bound += apower * seq.error_bounds[k];
    power *= lambda;
    apower *= a;
  }
  out.truncation_bound = seq.total_mass * apower / (1.0 - a);
  return out;
}

IdentityCheck functional_equation_residual(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const IntervalSet& set, double lambda, std::size_t n,
                                           const EngineOptions& opts) {
  check_unit_disc(lambda, "lambda");
  if (n == 0) throw DomainError("n must be at least 1");
  const auto pair = shift_pair(map, mu, set, n, opts);
  const auto sa = mgf_partial(pair.a, lambda, n);
  double sb = 0.0;
  double sb_bound = 0.0;
  if (n > 1) {
    const auto m = mgf_partial(pair.b, lambda, n - 1);
    sb = m.value;
    sb_bound = m.engine_bound;
    double apower = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      sb_bound += apower * pair.tail[k];
      apower *= std::abs(lambda);
    }
  }
  IdentityCheck out;
  out.residual = std::abs(sa.value - lambda * sb - measure_of(mu, set));
  out.tolerance = kRounding + sa.engine_bound + std::abs(lambda) * sb_bound;
  return out;
}

CorollaryCheck corollary_identity_check(const PiecewiseMap& map, const DensityMeasure& mu,
                                        const IntervalSet& set, double s, std::size_t n,
                                        const EngineOptions& opts) {
  check_unit_disc(s, "s");
  const auto seq = pullback_sequence(map, mu, set, n + 1, opts);
  const auto& c = seq.values;
  const auto& e = seq.error_bounds;
  const double as = std::abs(s);
  double sum = 0.0;
  double engine = 0.0;
  double power = 1.0;
  double apower = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += power * (c[k] - s * c[k + 1]);
    engine += apower * (e[k] + as * e[k + 1]);
    power *= s;
    apower *= as;
  }
  CorollaryCheck out;
  out.residual = std::abs(sum - measure_of(mu, set));
  out.bound = seq.total_mass * apower + engine + kRounding;
  out.identity_defect = std::abs(sum - (c[0] - power * c[n]));
  return out;
}

IdentityCheck schur_identity_residual(const PiecewiseMap& map, const DensityMeasure& mu,
                                      const IntervalSet& set, std::size_t n,
                                      const EngineOptions& opts) {
  if (n == 0) throw DomainError("n must be at least 1");
  const auto pair = shift_pair(map, mu, set, n + 1, opts);
  const double nd = static_cast<double>(n);
  const double mb = cesaro(pair.b, n);
  const double ma = cesaro(pair.a, n + 1);
  IdentityCheck out;
  out.residual = std::abs(mb - ((nd + 1.0) / nd) * ma + measure_of(mu, set) / nd);
  double tails = 0.0;
  for (std::size_t k = 0; k < n; ++k) tails += pair.tail[k];
  out.tolerance = kRounding + cesaro_engine_bound(pair.b, n) + tails / nd +
                  ((nd + 1.0) / nd) * cesaro_engine_bound(pair.a, n + 1);
  return out;
}

std::vector<double> abel_grid(std::size_t n, double total_mass) {
  std::vector<double> grid{0.5};
  for (int j = 2; j < 52; ++j) {
    const double lambda = 1.0 - std::ldexp(1.0, -j);
    const double tail = total_mass * std::pow(lambda, static_cast<double>(n)) / (1.0 - lambda);
    if (!(tail < 1e-6)) break;
    grid.push_back(lambda);
  }
  return grid;
}

AbelEstimate abel_estimate(const PullbackSequence& seq, const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("Abel grid is empty");
  if (seq.size() == 0) throw DomainError("Abel estimate needs a nonempty sequence");
  const double limit = 1.0 - 1.0 / static_cast<double>(seq.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] > 0.0 && grid[j] < 1.0)) throw DomainError("Abel grid values must lie in (0,1)");
    if (j > 0 && !(grid[j] > grid[j - 1])) throw DomainError("Abel grid must be increasing");
  }
  if (!(grid.back() < limit) && seq.size() > 1) {
    throw DomainError("Abel grid reaches 1 - 1/n; the sequence is too short for it");
  }
  const std::size_t n = seq.size();
  AbelEstimate out;
  out.lambda_grid = grid;
  std::vector<double> slack(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double lambda = grid[j];
    const auto m = mgf_partial(seq, lambda, n);
    const double ln = std::pow(lambda, static_cast<double>(n));
    const double h = 1.0 - lambda;
    // Complete the series with the last term held constant.
    out.raw.push_back(h * m.value + seq.values.back() * ln);
    slack[j] = seq.total_mass * ln + h * m.engine_bound + seq.error_bounds.back() * ln;
  }

  const std::size_t m = std::min<std::size_t>(3, grid.size());
  const std::size_t first = grid.size() - m;
  auto extrapolate = [&](std::size_t count, double* propagated) {
    std::vector<double> h;
    for (std::size_t j = grid.size() - count; j < grid.size(); ++j) h.push_back(1.0 - grid[j]);
    const auto w = weights_at_zero(h);
    double value = 0.0;
    double prop = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      value += w[i] * out.raw[grid.size() - count + i];
      prop += std::abs(w[i]) * slack[grid.size() - count + i];
    }
    if (propagated) *propagated = prop;
    return value;
  };
  double propagated = 0.0;
  out.extrapolated = extrapolate(m, &propagated);
  double increment = 0.0;
  if (m > 1) {
    increment = std::abs(out.extrapolated - extrapolate(m - 1, nullptr));
  } else {
    // One point: the Abel mean differs from its limit by O(1 - lambda).
    increment = seq.total_mass * (1.0 - grid[first]);
  }
  out.uncertainty = increment + propagated;
  const auto [lo, hi] = std::minmax_element(out.raw.begin(), out.raw.end());
  if (out.extrapolated < *lo - out.uncertainty) out.uncertainty = *lo - out.extrapolated;
  if (out.extrapolated > *hi + out.uncertainty) out.uncertainty = out.extrapolated - *hi;
  return out;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::cesaro:
      return "cesaro";
    case Method::abel:
      return "abel";
    case Method::both:
      return "both";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "cesaro") return Method::cesaro;
  if (name == "abel") return Method::abel;
  if (name == "both") return Method::both;
  throw DomainError("unknown method '" + std::string(name) + "' (expected cesaro, abel, both)");
}

InvariantMeasureEstimate invariant_measure(const PullbackSequence& seq, Method method,
                                           const std::optional<std::vector<double>>& grid) {
  InvariantMeasureEstimate out;
  out.method = method;
  out.n = seq.size();
  if (method != Method::abel) {
    const std::size_t n = seq.size();
    const double c = cesaro(seq, n);
    double unc = cesaro_engine_bound(seq, n);
    if (n >= 2) unc += std::abs(c - cesaro(seq, n / 2));
    out.cesaro = c;
    out.cesaro_uncertainty = unc;
    out.value = c;
    out.uncertainty = unc;
  }
  if (method != Method::cesaro) {
    out.abel = abel_estimate(seq, grid.value_or(abel_grid(seq.size(), seq.total_mass)));
    if (method == Method::abel) {
      out.value = out.abel->extrapolated;
      out.uncertainty = out.abel->uncertainty;
    }
  }
  if (method == Method::both) out.discrepancy = std::abs(*out.cesaro - out.abel->extrapolated);
  out.sequence = seq;
  return out;
}

InvariantMeasureEstimate invariant_measure(const PiecewiseMap& map, const DensityMeasure& mu,
                                           const IntervalSet& set, Method method,
                                           const Budget& budget) {
  auto seq = pullback_sequence(map, mu, set, budget.n, budget.engine);
  return invariant_measure(seq, method, budget.lambda_grid);
}

InvarianceResiduals invariance_residuals(const PiecewiseMap& map, const DensityMeasure& mu,
                                         const IntervalSet& set,
                                         const std::function<double(double)>& f,
                                         const Budget& budget) {
  const auto avg = cesaro_density(map, mu, budget.n, budget.engine);
  const auto pushed = transfer_apply(map, avg.density, budget.engine.transfer);
  InvarianceResiduals out;
  out.set_residual =
      std::abs(pushed.density.integrate_over(set) - avg.density.integrate_over(set));
  out.testfn_residual = std::abs(pushed.density.integrate(f) - avg.density.integrate(f));
  out.density_error = avg.error_bound + pushed.tail_bound;
  return out;
}

std::vector<double> additivity_diagnostic(const PiecewiseMap& map, const DensityMeasure& mu,
                                          const std::vector<IntervalSet>& nested_sets,
                                          std::size_t n_max, const EngineOptions& opts) {
  const auto seqs = pullback_sequences(map, mu, nested_sets, n_max, opts);
  std::vector<double> out;
  for (const auto& seq : seqs) {
    double sum = 0.0;
    double best = 0.0;
    for (std::size_t m = 1; m <= n_max; ++m) {
      sum += seq.values[m - 1];
      best = std::max(best, sum / static_cast<double>(m));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace imf
