#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "imf/error.hpp"
#include "imf/pullback.hpp"

using namespace imf;

namespace {

EngineOptions with_engine(Engine e) {
  EngineOptions o;
  o.engine = e;
  return o;
}

}  // namespace

TEST_CASE("engine names and defaults") {
  CHECK(parse_engine("transfer") == Engine::transfer);
  CHECK(to_string(Engine::montecarlo) == "montecarlo");
  CHECK_THROWS_AS(parse_engine("magic"), DomainError);
  CHECK(default_engine(builtin_map("tent")) == Engine::geometric);
  CHECK(default_engine(builtin_map("halving")) == Engine::geometric);
  CHECK(default_engine(builtin_map("doubling")) == Engine::geometric);
  CHECK(default_engine(builtin_map("gauss")) == Engine::transfer);
  CHECK(default_engine(builtin_map("logistic")) == Engine::transfer);
}

TEST_CASE("tent sequences are constant") {
  Rng rng(41);
  const auto tent = builtin_map("tent");
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testgen::random_set(rng, 2);
    const auto seq = pullback_sequence(tent, lebesgue_measure(), a, 20);
    REQUIRE(seq.size() == 20);
    for (std::size_t k = 0; k < 20; ++k) {
      CHECK(std::abs(seq.values[k] - a.total_length()) <= 1e-12);
      CHECK(seq.error_bounds[k] >= 0.0);
    }
    CHECK(seq.provenance.engine == Engine::geometric);
    CHECK(seq.provenance.map == "tent");
  }
}

TEST_CASE("halving sequence") {
  const auto seq =
      pullback_sequence(builtin_map("halving"), lebesgue_measure(), IntervalSet::single(0, 0.125), 5);
  CHECK(seq.values == std::vector<double>{0.125, 0.25, 0.5, 1.0, 1.0});
  const auto tr = pullback_sequence(builtin_map("halving"), lebesgue_measure(),
                                    IntervalSet::single(0, 0.125), 5, with_engine(Engine::transfer));
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(std::abs(tr.values[k] - seq.values[k]) <= tr.error_bounds[k] + 1e-12);
  }
}

TEST_CASE("gauss sequence approaches the Gauss-Kuzmin value") {
  const auto seq =
      pullback_sequence(builtin_map("gauss"), lebesgue_measure(), IntervalSet::single(0, 0.5), 11);
  CHECK(seq.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(seq.values[10] - std::log2(1.5)) < 1e-4);
  CHECK(seq.error_bounds[10] < 1e-5);
  // Independent oracle for c_1: sum_k (1/k - 1/(k+0.5)) with the exact tail.
  double c1 = 0.0;
  for (int k = 1; k <= 2000000; ++k) c1 += 1.0 / k - 1.0 / (k + 0.5);
  c1 += 0.5 / 2000000.5;  // tail ~ sum_{k>K} 0.5/k^2
  CHECK(std::abs(seq.values[1] - c1) <= seq.error_bounds[1] + 1e-9);
}

TEST_CASE("c_0 is mu(A)") {
  Rng rng(42);
  const auto gm = gauss_measure();
  for (const char* name : {"tent", "gauss", "logistic", "halving"}) {
    const auto map = builtin_map(name);
    const auto a = testgen::random_set(rng);
    const auto seq = pullback_sequence(map, gm, a, 3);
    CHECK(std::abs(seq.values[0] - measure_of(gm, a)) <= 1e-12);
  }
}

TEST_CASE("errors") {
  const auto tent = builtin_map("tent");
  const auto a = IntervalSet::single(0, 0.5);
  CHECK_THROWS_AS(pullback_sequence(tent, lebesgue_measure(), a, 0), DomainError);
  EngineOptions tiny = with_engine(Engine::geometric);
  tiny.preimage.component_cap = 100;
  CHECK_THROWS_AS(pullback_sequence(tent, lebesgue_measure(), a, 12, tiny), CapacityError);
}

TEST_CASE("property: geometric and transfer engines agree on the tent map") {
  Rng rng(43);
  const auto tent = builtin_map("tent");
  std::vector<IntervalSet> sets;
  for (int i = 0; i < 20; ++i) sets.push_back(testgen::random_set(rng, 3));
  const auto geo = pullback_sequences(tent, lebesgue_measure(), sets, 13, with_engine(Engine::geometric));
  const auto tr = pullback_sequences(tent, lebesgue_measure(), sets, 13, with_engine(Engine::transfer));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t k = 0; k <= 12; ++k) {
      CHECK(std::abs(geo[i].values[k] - tr[i].values[k]) < 1e-8);
    }
  }
}

TEST_CASE("property: Monte Carlo bounds cover at least 99% of entries") {
  const auto tent = builtin_map("tent");
  const auto halving = builtin_map("halving");
  Rng rng(44);
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& map = trial % 2 == 0 ? tent : halving;
    const auto a = testgen::random_set(rng, 2);
    const auto geo = pullback_sequence(map, lebesgue_measure(), a, 6);
    EngineOptions mc = with_engine(Engine::montecarlo);
    mc.samples = 4000;
    mc.seed = Rng::derive(7, trial);
    const auto est = pullback_sequence(map, lebesgue_measure(), a, 6, mc);
    for (std::size_t k = 0; k < 6; ++k) {
      covered += std::abs(est.values[k] - geo.values[k]) <= est.error_bounds[k];
    }
  }
  // Each trial compares six entries; at least 99% of them must be covered.
  CHECK(covered >= 594);
}

TEST_CASE("property: shift identity") {
  Rng rng(45);
  for (const char* name : {"tent", "halving", "doubling", "gauss"}) {
    const auto map = builtin_map(name);
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = testgen::random_set(rng, 2);
      PreimageOptions popts;
      popts.max_branches = 1000;
      const auto pre = preimage(map, a, popts);
      const auto seq_a = pullback_sequence(map, lebesgue_measure(), a, 8);
      const auto seq_p = pullback_sequence(map, lebesgue_measure(), pre.set, 7);
      for (std::size_t k = 0; k + 1 < 8; ++k) {
        const double tol = seq_a.error_bounds[k + 1] + seq_p.error_bounds[k] +
                           2.0 * pre.tail_bound + 1e-12;
        CHECK(std::abs(seq_a.values[k + 1] - seq_p.values[k]) <= tol);
      }
    }
  }
}

TEST_CASE("property: every engine is deterministic") {
  const auto a = IntervalSet::parse("0.1:0.3,0.6:0.65");
  for (Engine e : {Engine::geometric, Engine::transfer, Engine::montecarlo}) {
    const auto map = builtin_map("tent");
    EngineOptions o = with_engine(e);
    o.samples = 20000;
    const auto x = pullback_sequence(map, lebesgue_measure(), a, 10, o);
    const auto y = pullback_sequence(map, lebesgue_measure(), a, 10, o);
    CHECK(x.values == y.values);
    CHECK(x.error_bounds == y.error_bounds);
  }
}

TEST_CASE("Monte Carlo on gauss and logistic uses the bulk kernels") {
  EngineOptions mc = with_engine(Engine::montecarlo);
  mc.samples = 200000;
  const auto g = pullback_sequence(builtin_map("gauss"), lebesgue_measure(),
                                   IntervalSet::single(0, 0.5), 20, mc);
  CHECK(std::abs(g.values[19] - std::log2(1.5)) <= g.error_bounds[19]);
  const auto l = pullback_sequence(builtin_map("logistic"), lebesgue_measure(),
                                   IntervalSet::single(0, 0.25), 50, mc);
  CHECK(std::abs(l.values[49] - 1.0 / 3.0) <= l.error_bounds[49]);
}

TEST_CASE("sequence bounds stay inside [0, mu(M)]") {
  Rng rng(46);
  for (const char* name : {"gauss", "logistic"}) {
    const auto map = builtin_map(name);
    const auto a = testgen::random_set(rng, 3);
    const auto seq = pullback_sequence(map, lebesgue_measure(), a, 30);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      CHECK(seq.values[k] >= -seq.error_bounds[k]);
      CHECK(seq.values[k] <= seq.total_mass + seq.error_bounds[k]);
    }
  }
}

TEST_CASE("cesaro density of the tent map stays Lebesgue") {
  const auto cd = cesaro_density(builtin_map("tent"), lebesgue_measure(), 50);
  CHECK(cd.density.mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : cd.density.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}
