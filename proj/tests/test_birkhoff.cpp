#include <doctest.h>

#include <cmath>
#include <numbers>

#include "imf/birkhoff.hpp"
#include "imf/error.hpp"
#include "imf/mgf.hpp"

using namespace imf;

namespace {

const double kPiMinus3 = std::numbers::pi - 3.0;
const double kGaussMeanX = (1.0 - std::numbers::ln2) / std::numbers::ln2;

double one(double) { return 1.0; }
double ident(double x) { return x; }

}  // namespace

TEST_CASE("birkhoff average examples") {
  for (const char* name : {"tent", "gauss", "halving", "logistic"}) {
    const auto r = birkhoff_average(builtin_map(name), one, 0.3, 1000);
    CHECK(r.average == 1.0);
  }
  const auto h = birkhoff_average(builtin_map("halving"), ident, 1.0, 4000);
  CHECK(h.average == doctest::Approx(2.0 / 4000).epsilon(1e-9));

  const auto g = birkhoff_average(builtin_map("gauss"),
                                  [](double x) { return x > 0.5 ? 1.0 : 0.0; }, kPiMinus3, 1000000);
  CHECK(std::abs(g.average - std::log2(4.0 / 3.0)) <= 5e-3);
  CHECK_FALSE(g.degenerate);

  CHECK_THROWS_AS(birkhoff_average(builtin_map("tent"), one, 0.3, 0), DomainError);
  CHECK_THROWS_AS(birkhoff_average(builtin_map("tent"), one, -0.1, 10), DomainError);
}

TEST_CASE("degenerate gauss orbits are flagged") {
  const auto r = birkhoff_average(builtin_map("gauss"), ident, 0.4, 10);
  CHECK(r.degenerate);
  CHECK(r.degenerate_step == 2);
}

TEST_CASE("running profile") {
  BirkhoffOptions opts;
  opts.profile_points = 20;
  const auto r = birkhoff_average(builtin_map("logistic"), ident, 0.2, 5000, opts);
  REQUIRE_FALSE(r.running_profile.empty());
  CHECK(r.running_profile.back().first == 5000);
  CHECK(r.running_profile.back().second == r.average);
  for (std::size_t i = 1; i < r.running_profile.size(); ++i) {
    CHECK(r.running_profile[i].first > r.running_profile[i - 1].first);
  }
}

TEST_CASE("property: Cesaro prefix increments are bounded") {
  Rng rng(81);
  const auto f = [](double x) { return std::sin(7 * x); };
  for (const char* name : {"gauss", "logistic", "tent"}) {
    const auto map = builtin_map(name);
    for (int trial = 0; trial < 5; ++trial) {
      const double x0 = rng.uniform();
      double prev = 0.0;
      for (std::size_t n = 1; n <= 200; ++n) {
        const double avg = birkhoff_average(map, f, x0, n).average;
        if (n > 1) CHECK(std::abs(avg - prev) <= 2.0 / n + 1e-15);
        prev = avg;
      }
    }
  }
}

TEST_CASE("property: seeded runs are bit-identical") {
  BirkhoffOptions opts;
  opts.orbit.seed = 99;
  opts.profile_points = 8;
  const auto a = birkhoff_average(builtin_map("tent"), ident, 0.3, 10000, opts);
  const auto b = birkhoff_average(builtin_map("tent"), ident, 0.3, 10000, opts);
  CHECK(a.average == b.average);
  CHECK(a.running_profile == b.running_profile);
  CHECK(a.dithered);

  const auto d1 = duality_check(builtin_map("tent"), lebesgue_measure(), ident, 100, 500, 5);
  const auto d2 = duality_check(builtin_map("tent"), lebesgue_measure(), ident, 100, 500, 5);
  CHECK(d1.lhs == d2.lhs);
  CHECK(d1.rhs == d2.rhs);
}

TEST_CASE("time averages") {
  Rng rng(82);
  std::vector<double> points;
  for (int i = 0; i < 20; ++i) points.push_back(rng.uniform());
  const auto g = time_average_function(builtin_map("gauss"), ident, points, 100000);
  REQUIRE(g.size() == 20);
  for (const auto& r : g) CHECK(std::abs(r.average - kGaussMeanX) <= 2e-2);

  const auto h = time_average_function(builtin_map("halving"), ident, {0.2, 0.9}, 100000);
  for (const auto& r : h) CHECK(r.average < 1e-4);

  const auto c = time_average_function(builtin_map("logistic"), one, points, 1000);
  for (const auto& r : c) CHECK(r.average == 1.0);

  const auto again = time_average_function(builtin_map("gauss"), ident, points, 100000);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].average == again[i].average);
}

TEST_CASE("property: ergodic starts agree in distribution") {
  Rng rng(83);
  std::vector<double> points;
  for (int i = 0; i < 100; ++i) points.push_back(rng.uniform());
  const auto g = time_average_function(builtin_map("gauss"), ident, points, 20000);
  int within = 0;
  for (const auto& r : g) within += std::abs(r.average - kGaussMeanX) <= 2e-2;
  CHECK(within >= 95);
}

TEST_CASE("duality") {
  const auto t = duality_check(builtin_map("tent"), lebesgue_measure(), ident, 200, 2000, 1);
  CHECK(t.lhs == doctest::Approx(0.5).epsilon(2e-2));
  CHECK(t.rhs == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(t.gap <= t.uncertainty);

  const auto ind = [](double x) { return x > 0.0 && x <= 0.5 ? 1.0 : 0.0; };
  const auto g = duality_check(builtin_map("gauss"), lebesgue_measure(), ind, 200, 2000, 2);
  CHECK(std::abs(g.lhs - std::log2(1.5)) < 1e-2);
  CHECK(std::abs(g.rhs - std::log2(1.5)) < 1e-2);
  CHECK(g.gap < 1e-2);

  const auto c = duality_check(builtin_map("logistic"), lebesgue_measure(), one, 50, 100, 3);
  CHECK(c.gap <= 1e-12);
}

TEST_CASE("orbit and measure estimates of gauss agree") {
  const auto ind = [](double x) { return x > 0.5 ? 1.0 : 0.0; };
  const auto orbit_avg = birkhoff_average(builtin_map("gauss"), ind, std::sqrt(2.0) - 1, 1000000);
  Budget b;
  b.n = 200;
  const auto est = invariant_measure(builtin_map("gauss"), lebesgue_measure(),
                                     IntervalSet::single(0.5, 1), Method::both, b);
  CHECK(std::abs(orbit_avg.average - est.value) <= 5e-3 + est.uncertainty);
}

TEST_CASE("gauss digit frequencies") {
  CHECK(gauss_kuzmin_frequency(1) == doctest::Approx(std::log2(4.0 / 3.0)));
  CHECK(gauss_kuzmin_frequency(2) == doctest::Approx(std::log2(9.0 / 8.0)));
  double total = 0.0;
  for (std::size_t k = 1; k <= 1000000; ++k) total += gauss_kuzmin_frequency(k);
  CHECK(total == doctest::Approx(1.0).epsilon(2e-6));

  const auto t = gauss_digit_frequencies(5, 1000000, kPiMinus3);
  REQUIRE(t.rows.size() == 5);
  CHECK_FALSE(t.degenerate);
  CHECK(std::abs(t.rows[0].empirical - std::log2(4.0 / 3.0)) <= 5e-3);
  CHECK(std::abs(t.rows[1].empirical - std::log2(9.0 / 8.0)) <= 5e-3);
  for (const auto& r : t.rows) CHECK(r.closed_form == gauss_kuzmin_frequency(r.digit));

  const auto rational = gauss_digit_frequencies(3, 100, 0.375);
  CHECK(rational.degenerate);
  CHECK_THROWS_AS(gauss_digit_frequencies(0, 100, kPiMinus3), DomainError);
}
