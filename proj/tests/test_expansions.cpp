#include <doctest.h>

#include <cmath>

#include "imf/error.hpp"
#include "imf/expansions.hpp"
#include "imf/rng.hpp"

using namespace imf;

namespace {

double f(double x) { return 2 * x - x * x; }

double tent(double x) { return x <= 0.5 ? 2 * x : 2 * (1 - x); }

// Independent oracle in long double with a plain loop.
long double brute_series(double x, double s, int p, int terms) {
  long double sum = 0;
  long double w = 1;
  double y = x;
  for (int n = 0; n < terms; ++n) {
    sum += w * (p == 1 ? y : static_cast<long double>(y) * y);
    w *= s;
    y = tent(y);
  }
  return sum;
}

double random_dyadic(Rng& rng, int bits) {
  return std::ldexp(static_cast<double>(rng.next() >> (64 - bits)), -bits);
}

}  // namespace

TEST_CASE("tent series examples") {
  const auto a = tent_series(0.5, {0.25, 1, 40});
  CHECK(a.value == 0.75);
  CHECK(a.exact);
  CHECK(tent_series(0.25, {0.5, 2, 40}).value == 0.4375);
  for (double s : {-0.9, 0.0, 0.3, 0.7}) CHECK(tent_series(0.0, {s, 1, 40}).value == 0.0);
  CHECK(tent_series(0.5, {0.5, 1, 10}).truncation_bound == doctest::Approx(std::pow(0.5, 10) / 0.5));
  CHECK_THROWS_AS(tent_series(0.5, {1.0, 1, 10}), DomainError);
  CHECK_THROWS_AS(tent_series(0.5, {0.5, 3, 10}), DomainError);
  CHECK_THROWS_AS(tent_series(1.5, {0.5, 1, 10}), DomainError);
}

TEST_CASE("general decomposition examples") {
  Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform();
    CHECK(std::abs(general_decomposition(x, 0.25, 60).value - tent_series(x, {0.25, 1, 60}).value) <=
          1e-15);
    CHECK(std::abs(general_decomposition(x, 0.5, 60).value - tent_series(x, {0.5, 2, 60}).value) <=
          1e-15);
  }
  const auto v = general_decomposition(0.37, 0.3, 60);
  CHECK(std::abs(v.value - 0.6031) <= 1e-12);
  CHECK_THROWS_AS(general_decomposition(0.37, -1.0, 60), DomainError);
}

TEST_CASE("takagi examples") {
  CHECK(takagi_xi(0.0).value == 0.0);
  CHECK(takagi_xi(1.0).value == 1.0);
  CHECK(takagi_xi(0.5).value == 1.0);
  CHECK(takagi_xi(0.25).value == 0.75);
  CHECK(takagi_xi(0.3, 30).truncation_bound == std::ldexp(1.0, -29));
}

TEST_CASE("property: series match a brute-force oracle") {
  Rng rng(72);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform();
    const double s = 1.8 * rng.uniform() - 0.9;
    for (int p : {1, 2}) {
      const auto v = tent_series(x, {s, p, 50});
      CHECK(std::abs(v.value - static_cast<double>(brute_series(x, s, p, 50))) <= 1e-13);
    }
  }
}

TEST_CASE("property: self-similarity on exact dyadics") {
  Rng rng(73);
  for (int i = 0; i < 1000; ++i) {
    const double x = random_dyadic(rng, 20);
    const double s = std::ldexp(1.0, -1 - static_cast<int>(rng.next() % 4));
    for (int p : {1, 2}) {
      // Orbits of a 20-bit dyadic end at 0 within 21 steps, so 40 terms are exact.
      const double lhs = tent_series(x, {s, p, 40}).value;
      const double rhs = std::pow(x, p) + s * tent_series(tent(x), {s, p, 40}).value;
      CHECK(std::abs(lhs - rhs) <= 1e-15);
    }
    const double xi = takagi_xi(x).value;
    CHECK(std::abs(xi - (x + 0.5 * takagi_xi(tent(x)).value)) < 1e-12);
  }
}

TEST_CASE("property: identity suite on dyadic points") {
  Rng rng(74);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = random_dyadic(rng, 30);
    worst = std::max(worst, std::abs(tent_series(x, {0.25, 1, 40}).value - f(x)));
    worst = std::max(worst, std::abs(tent_series(x, {0.5, 2, 40}).value - f(x)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("property: decomposition does not depend on s") {
  Rng rng(75);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform();
    double lo = 1e9;
    double hi = -1e9;
    double bound = 0.0;
    for (double s : {-0.5, 0.0, 0.3, 0.49}) {
      const auto v = general_decomposition(x, s, 60);
      lo = std::min(lo, v.value);
      hi = std::max(hi, v.value);
      bound = std::max(bound, v.truncation_bound);
      CHECK(std::abs(v.value - f(x)) <= v.truncation_bound + 1e-14);
    }
    CHECK(hi - lo <= 2 * bound + 1e-14);
  }
}

TEST_CASE("roughness profile") {
  const auto rows = roughness_profile(32, 200, 9);
  REQUIRE(rows.size() == 32);
  CHECK(rows[0].level == 1);
  CHECK(rows[0].takagi == 2.0);
  for (const auto& r : rows) CHECK(r.smooth <= 2.0 + 1e-9);
  CHECK(rows[29].takagi > rows[4].takagi);
  CHECK(roughness_profile(32, 200, 9) == roughness_profile(32, 200, 9));
  CHECK_THROWS_AS(roughness_profile(41, 10), DomainError);
}
