#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "imf/kernels/kernels.hpp"
#include "imf/rng.hpp"

using namespace imf;
using kernels::InverseSpec;
using kernels::Isa;
using kernels::KernelTable;

namespace {

std::vector<double> uniform_values(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Sizes that exercise full vectors and every remainder length.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 13, 64, 1001};

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(kernels::available(Isa::scalar));
  CHECK(kernels::table(Isa::scalar).isa == Isa::scalar);
  const auto& active = kernels::active();
  CHECK((active.isa == Isa::scalar || kernels::available(Isa::avx2)));
}

TEST_CASE("scalar kernels match closed forms") {
  const auto& s = kernels::table(Isa::scalar);
  const double y[] = {0.0, 0.25, 0.5, 1.0};
  double out[4];

  s.apply_inverse({InverseSpec::Kind::affine, -0.5, 1.0}, y, out, 4);
  CHECK(out[1] == 0.875);
  s.apply_inverse({InverseSpec::Kind::reciprocal, 1.0, 2.0}, y, out, 4);
  CHECK(out[2] == doctest::Approx(0.4));
  s.apply_inverse({InverseSpec::Kind::sqrt_branch, 0.5, -0.5}, y, out, 4);
  CHECK(out[3] == 0.5);
  CHECK(out[0] == 0.0);

  double x[] = {0.3, 0.5, 0.0};
  s.logistic_steps(x, 3, 1);
  CHECK(x[0] == doctest::Approx(0.84));
  CHECK(x[1] == 1.0);
  CHECK(x[2] == 0.0);

  double g[] = {0.4, 0.0, 1.0};
  s.gauss_steps(g, 3, 1);
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 0.0);

  const double w[] = {1.0, 0.5, 0.25};
  const double angles[] = {0.0, std::numbers::pi / 2, std::numbers::pi};
  double c[3];
  s.cosine_series(w, 3, angles, c, 3);
  CHECK(c[0] == doctest::Approx(1.75));
  CHECK(c[1] == doctest::Approx(0.75));
  CHECK(c[2] == doctest::Approx(0.75));

  const double values[] = {0.0, 1.0, 0.5};
  double mass[] = {0.0, 0.0};
  s.accumulate_abs_diff(values, mass, 2);
  CHECK(mass[0] == 1.0);
  CHECK(mass[1] == 0.5);

  const double cum[] = {0.0, 0.25};
  const double cell_mass[] = {0.25, 0.75};
  const double t[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  double f[5];
  s.cumulative_uniform(cum, cell_mass, 2, t, f, 5);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(0.125));
  CHECK(f[2] == doctest::Approx(0.25));
  CHECK(f[3] == doctest::Approx(0.625));
  CHECK(f[4] == doctest::Approx(1.0));
}

TEST_CASE("avx2 kernels agree bit for bit with scalar") {
  if (!kernels::available(Isa::avx2)) {
    MESSAGE("avx2 unavailable on this machine; equivalence not exercised");
    return;
  }
  const KernelTable& s = kernels::table(Isa::scalar);
  const KernelTable& v = kernels::table(Isa::avx2);
  REQUIRE(v.isa == Isa::avx2);
  Rng rng(2024);

  SUBCASE("apply_inverse") {
    const InverseSpec specs[] = {
        {InverseSpec::Kind::affine, 0.5, 0.0},
        {InverseSpec::Kind::affine, -0.5, 1.0},
        {InverseSpec::Kind::reciprocal, 1.0, 3.0},
        {InverseSpec::Kind::sqrt_branch, 0.5, -0.5},
        {InverseSpec::Kind::sqrt_branch, 0.5, 0.5},
    };
    for (const auto& spec : specs) {
      for (std::size_t n : kSizes) {
        const auto y = uniform_values(rng, n);
        std::vector<double> a(n), b(n);
        s.apply_inverse(spec, y.data(), a.data(), n);
        v.apply_inverse(spec, y.data(), b.data(), n);
        CHECK(same_bits(a, b));
      }
    }
  }

  SUBCASE("cumulative_uniform") {
    for (std::size_t cells : {1u, 7u, 64u, 4096u}) {
      auto masses = uniform_values(rng, cells);
      std::vector<double> cum(cells);
      double acc = 0.0;
      for (std::size_t c = 0; c < cells; ++c) {
        cum[c] = acc;
        acc += masses[c];
      }
      for (std::size_t n : kSizes) {
        auto t = uniform_values(rng, n);
        if (n > 2) {
          t[0] = 0.0;
          t[1] = 1.0;
        }
        std::vector<double> a(n), b(n);
        s.cumulative_uniform(cum.data(), masses.data(), cells, t.data(), a.data(), n);
        v.cumulative_uniform(cum.data(), masses.data(), cells, t.data(), b.data(), n);
        CHECK(same_bits(a, b));
      }
    }
  }

  SUBCASE("accumulate_abs_diff") {
    for (std::size_t n : kSizes) {
      const auto values = uniform_values(rng, n + 1);
      auto a = uniform_values(rng, n);
      auto b = a;
      s.accumulate_abs_diff(values.data(), a.data(), n);
      v.accumulate_abs_diff(values.data(), b.data(), n);
      CHECK(same_bits(a, b));
    }
  }

  SUBCASE("cosine_series") {
    for (std::size_t terms : {1u, 2u, 17u, 257u}) {
      auto w = uniform_values(rng, terms);
      for (std::size_t n : kSizes) {
        auto angles = uniform_values(rng, n);
        for (auto& x : angles) x *= 2 * std::numbers::pi;
        std::vector<double> a(n), b(n);
        s.cosine_series(w.data(), terms, angles.data(), a.data(), n);
        v.cosine_series(w.data(), terms, angles.data(), b.data(), n);
        CHECK(same_bits(a, b));
      }
    }
  }

  SUBCASE("logistic_steps") {
    for (std::size_t n : kSizes) {
      auto a = uniform_values(rng, n);
      auto b = a;
      s.logistic_steps(a.data(), n, 37);
      v.logistic_steps(b.data(), n, 37);
      CHECK(same_bits(a, b));
    }
  }

  SUBCASE("gauss_steps") {
    for (std::size_t n : kSizes) {
      auto a = uniform_values(rng, n);
      if (n > 3) {
        a[0] = 0.0;
        a[1] = 1.0;
        a[2] = 0.5;
      }
      auto b = a;
      s.gauss_steps(a.data(), n, 23);
      v.gauss_steps(b.data(), n, 23);
      CHECK(same_bits(a, b));
    }
  }
}

TEST_CASE("select overrides the active table") {
  const Isa before = kernels::active().isa;
  kernels::select(Isa::scalar);
  CHECK(kernels::active().isa == Isa::scalar);
  kernels::select(before);
  CHECK(kernels::active().isa == before);
}
