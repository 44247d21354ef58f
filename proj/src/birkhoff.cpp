#include "imf/birkhoff.hpp"

#include <algorithm>
#include <cmath>

#include "imf/error.hpp"
#include "imf/parallel.hpp"
#include "imf/rng.hpp"

namespace imf {

namespace {

std::vector<std::size_t> checkpoints(std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  if (count == 0) return out;
  for (std::size_t i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count);
    const auto m = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), t)));
    const std::size_t v = std::clamp<std::size_t>(m, 1, n);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  if (out.back() != n) out.push_back(n);
  return out;
}

}  // namespace

OrbitAverageResult birkhoff_average(const PiecewiseMap& map, const std::function<double(double)>& f,
                                    double x0, std::size_t n, const BirkhoffOptions& opts) {
  if (n == 0) throw DomainError("orbit length must be at least 1");
  OrbitCursor cur(map, x0, opts.orbit);
  OrbitAverageResult out;
  out.x0 = x0;
  out.n = n;
  out.dithered = cur.dithered();
  out.seed = opts.orbit.seed;
  const auto marks = checkpoints(n, opts.profile_points);
  std::size_t next_mark = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = cur.value();
    if (!out.degenerate && map.is_degenerate(x)) {
      out.degenerate = true;
      out.degenerate_step = k;
    }
    sum += f(x);
    if (next_mark < marks.size() && marks[next_mark] == k + 1) {
      out.running_profile.emplace_back(k + 1, sum / static_cast<double>(k + 1));
      ++next_mark;
    }
    if (k + 1 < n) cur.advance();
  }
  out.average = sum / static_cast<double>(n);
  if (!out.running_profile.empty()) out.running_profile.back().second = out.average;
  return out;
}

std::vector<OrbitAverageResult> time_average_function(const PiecewiseMap& map,
                                                      const std::function<double(double)>& f,
                                                      const std::vector<double>& points,
                                                      std::size_t n,
                                                      const BirkhoffOptions& opts) {
  std::vector<OrbitAverageResult> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    BirkhoffOptions local = opts;
    local.orbit.seed = Rng::derive(opts.orbit.seed, i);
    out[i] = birkhoff_average(map, f, points[i], n, local);
  });
  return out;
}

DualityResult duality_check(const PiecewiseMap& map, const DensityMeasure& mu,
                            const std::function<double(double)>& f, std::size_t n_orbit,
                            std::size_t n_samples, std::uint64_t seed,
                            const EngineOptions& engine) {
  if (n_orbit == 0 || n_samples < 2) throw DomainError("duality check needs positive budgets");
  std::vector<double> starts(n_samples);
  Rng rng(seed);
  for (auto& x : starts) x = sample(mu, rng);
  BirkhoffOptions opts;
  opts.orbit.seed = seed;
  const auto avgs = time_average_function(map, f, starts, n_orbit, opts);
  double mean = 0.0;
  for (const auto& a : avgs) mean += a.average;
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (const auto& a : avgs) var += (a.average - mean) * (a.average - mean);
  var /= static_cast<double>(n_samples - 1);

  const auto density = cesaro_density(map, mu, n_orbit, engine);
  double sup = 0.0;
  for (double x : density.density.nodes()) sup = std::max(sup, std::abs(f(x)));

  DualityResult out;
  out.lhs = mu.total_mass * mean;
  out.rhs = density.density.integrate(f);
  out.gap = std::abs(out.lhs - out.rhs);
  out.uncertainty = mu.total_mass * 3.0 * std::sqrt(var / static_cast<double>(n_samples)) +
                    density.error_bound * sup;
  return out;
}

double gauss_kuzmin_frequency(std::size_t k) {
  if (k == 0) throw DomainError("continued-fraction digits start at 1");
  const double kd = static_cast<double>(k);
  // log2(1 + 1/(k(k+2)))
  return std::log1p(1.0 / (kd * (kd + 2.0))) / std::log(2.0);
}

DigitTable gauss_digit_frequencies(std::size_t k_max, std::size_t n, double x0) {
  if (k_max == 0) throw DomainError("k_max must be at least 1");
  if (n == 0) throw DomainError("orbit length must be at least 1");
  if (!(x0 > 0.0 && x0 < 1.0)) throw DomainError("x0 must lie in (0,1)");
  std::vector<std::size_t> counts(k_max + 1, 0);
  DigitTable out;
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x == 0.0) {
      out.degenerate = true;
      out.degenerate_step = i;
      break;
    }
    const double r = 1.0 / x;
    const double fl = std::floor(r);
    // x in (1/(k+1), 1/k] has digit k; r = k exactly belongs to digit k.
    const auto k = static_cast<std::size_t>(fl);
    if (k >= 1 && k <= k_max) ++counts[k];
    x = r - fl;
  }
  for (std::size_t k = 1; k <= k_max; ++k) {
    out.rows.push_back(
        {k, static_cast<double>(counts[k]) / static_cast<double>(n), gauss_kuzmin_frequency(k)});
  }
  return out;
}

}  // namespace imf
