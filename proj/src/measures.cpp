#include "imf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "imf/error.hpp"

namespace imf {

namespace {

constexpr std::size_t kMaxEvaluations = 1'000'000;
constexpr std::size_t kRulePoints = 15;

}  // namespace

double adaptive_integrate(const RealFn& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, kRulePoints>;
  struct Piece {
    double lo, hi, value, error;
  };
  std::size_t evaluations = 0;
  bool finite = true;
  auto guarded = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) finite = false;
    return v;
  };
  auto eval = [&](double lo, double hi) {
    double err = 0.0;
    const double v = Rule::integrate(guarded, lo, hi, 0, 0.0, &err);
    evaluations += kRulePoints;
    if (!finite) throw NumericError("integrand is not finite");
    return Piece{lo, hi, v, err};
  };

  std::vector<Piece> done;
  std::vector<Piece> todo{eval(a, b)};
  const double width = b - a;
  while (!todo.empty()) {
    Piece p = todo.back();
    todo.pop_back();
    // Each piece gets a share of the tolerance proportional to its width.
    const double share = tol * (p.hi - p.lo) / width;
    const double mid = 0.5 * (p.lo + p.hi);
    if (p.error <= share || !(mid > p.lo && mid < p.hi)) {
      done.push_back(p);
      continue;
    }
    if (evaluations + 2 * kRulePoints > kMaxEvaluations) {
      throw NumericError("adaptive quadrature did not reach tolerance within the evaluation cap");
    }
    todo.push_back(eval(p.lo, mid));
    todo.push_back(eval(mid, p.hi));
  }
  std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  double sum = 0.0;
  for (const auto& p : done) sum += p.value;
  return sum;
}

DensityMeasure lebesgue_measure() {
  DensityMeasure mu;
  mu.name = "lebesgue";
  mu.density = [](double) { return 1.0; };
  mu.cdf = RealFn([](double x) { return x; });
  mu.inverse_cdf = RealFn([](double u) { return u; });
  mu.total_mass = 1.0;
  mu.density_bound = 1.0;
  mu.constant_density = 1.0;
  return mu;
}

DensityMeasure gauss_measure() {
  DensityMeasure mu;
  mu.name = "gauss";
  mu.density = [](double x) { return 1.0 / (std::numbers::ln2 * (1.0 + x)); };
  mu.cdf = RealFn([](double x) { return std::log1p(x) / std::numbers::ln2; });
  mu.inverse_cdf = RealFn([](double u) { return std::expm1(u * std::numbers::ln2); });
  mu.total_mass = 1.0;
  mu.density_bound = 1.0 / std::numbers::ln2;
  return mu;
}

DensityMeasure measure_from_sample_text(std::string name, std::string_view text) {
  std::vector<double> xs;
  std::vector<double> rs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double x = 0.0;
    double r = 0.0;
    if (!(row >> x >> r)) {
      throw DomainError("density table line " + std::to_string(lineno) + " is not 'x rho'");
    }
    if (!std::isfinite(r) || r < 0.0) throw DomainError("density table has a negative value");
    if (!xs.empty() && !(x > xs.back())) throw DomainError("density table x must increase");
    xs.push_back(x);
    rs.push_back(r);
  }
  if (xs.size() < 2 || xs.front() != 0.0 || xs.back() != 1.0) {
    throw DomainError("density table must run from x = 0 to x = 1");
  }
  std::vector<double> prefix(xs.size(), 0.0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    prefix[i + 1] = prefix[i] + 0.5 * (rs[i] + rs[i + 1]) * (xs[i + 1] - xs[i]);
  }
  auto segment = [xs](double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - xs.begin() - 1, 0));
    return std::min(i, xs.size() - 2);
  };
  DensityMeasure mu;
  mu.name = std::move(name);
  mu.density = [xs, rs, segment](double x) {
    const std::size_t i = segment(x);
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return rs[i] + t * (rs[i + 1] - rs[i]);
  };
  mu.cdf = RealFn([xs, rs, prefix, segment](double x) {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t i = segment(x);
    const double w = xs[i + 1] - xs[i];
    const double t = x - xs[i];
    return prefix[i] + rs[i] * t + 0.5 * (rs[i + 1] - rs[i]) * t * t / w;
  });
  mu.total_mass = prefix.back();
  mu.density_bound = *std::max_element(rs.begin(), rs.end());
  return mu;
}

DensityMeasure builtin_measure(std::string_view name) {
  if (name == "lebesgue") return lebesgue_measure();
  if (name == "gauss") return gauss_measure();
  throw DomainError("unknown measure '" + std::string(name) + "' (expected lebesgue, gauss)");
}

double measure_of(const DensityMeasure& mu, const IntervalSet& set) {
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& iv : set.components()) {
    const double v = mu.cdf ? (*mu.cdf)(iv.hi) - (*mu.cdf)(iv.lo)
                            : adaptive_integrate(mu.density, iv.lo, iv.hi, 1e-10);
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return std::clamp(sum + carry, 0.0, mu.total_mass);
}

double integrate(const RealFn& f, const DensityMeasure& mu) {
  return adaptive_integrate([&](double x) { return f(x) * mu.density(x); }, 0.0, 1.0, 1e-9);
}

double sample(const DensityMeasure& mu, Rng& rng) {
  if (mu.inverse_cdf && mu.total_mass == 1.0) {
    return std::clamp((*mu.inverse_cdf)(rng.uniform()), 0.0, 1.0);
  }
  const double bound = mu.density_bound;
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw DomainError("rejection sampling needs a finite positive density bound");
  }
  for (;;) {
    const double x = rng.uniform();
    if (rng.uniform() * bound <= mu.density(x)) return x;
  }
}

GridDensity discretize(const DensityMeasure& mu, GridKind kind, std::size_t cells) {
  const auto nodes = grid_nodes(kind, cells);
  std::vector<double> masses(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    if (mu.cdf) {
      masses[c] = (*mu.cdf)(nodes[c + 1]) - (*mu.cdf)(nodes[c]);
    } else {
      masses[c] = boost::math::quadrature::gauss<double, 8>::integrate(mu.density, nodes[c],
                                                                       nodes[c + 1]);
    }
    masses[c] = std::max(masses[c], 0.0);
  }
  return GridDensity::from_cell_masses(kind, masses);
}

SignedPullbackCombination::SignedPullbackCombination(DensityMeasure mu, PiecewiseMap map,
                                                     double s, PreimageOptions opts)
    : mu_(std::move(mu)), map_(std::move(map)), s_(s), opts_(opts) {
  if (!(std::abs(s) < 1.0)) throw DomainError("signed pullback combination needs |s| < 1");
}

double SignedPullbackCombination::operator()(const IntervalSet& set) const {
  if (s_ == 0.0) return measure_of(mu_, set);
  const auto pre = preimage(map_, set, opts_);
  return measure_of(mu_, set) - s_ * measure_of(mu_, pre.set);
}

double SignedPullbackCombination::error_bound(const IntervalSet& set) const {
  if (s_ == 0.0) return 0.0;
  return std::abs(s_) * mu_.density_bound * preimage(map_, set, opts_).tail_bound;
}

SignedPullbackCombination signed_pullback_combination(const DensityMeasure& mu,
                                                      const PiecewiseMap& map, double s) {
  return SignedPullbackCombination(mu, map, s);
}

}  // namespace imf
