#include "imf/app/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "imf/birkhoff.hpp"
#include "imf/error.hpp"
#include "imf/expansions.hpp"
#include "imf/mgf.hpp"
#include "imf/rng.hpp"
#include "imf/spectral.hpp"

namespace imf::app {

namespace {

class Checks {
 public:
  /// Records `label=value (<= tol)`; passes when value <= tol.
  void at_most(const std::string& label, double value, double tol) {
    record(label + "=" + fmt(value) + " (<= " + fmt(tol) + ")", value <= tol);
  }
  void at_least(const std::string& label, double value, double tol) {
    record(label + "=" + fmt(value) + " (>= " + fmt(tol) + ")", value >= tol);
  }
  void flag(const std::string& label, bool ok) { record(label + (ok ? " ok" : " FAILED"), ok); }

  [[nodiscard]] bool ok() const noexcept { return ok_; }
  [[nodiscard]] const std::string& text() const noexcept { return text_; }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  void record(const std::string& s, bool ok) {
    if (!text_.empty()) text_ += "; ";
    text_ += s;
    ok_ = ok_ && ok;
  }

  bool ok_ = true;
  std::string text_;
};

IntervalSet random_set(Rng& rng) {
  const std::size_t parts = 1 + rng.next() % 3;
  std::vector<double> pts(2 * parts);
  for (auto& p : pts) p = rng.uniform();
  std::sort(pts.begin(), pts.end());
  std::vector<Interval> raw;
  for (std::size_t i = 0; i < parts; ++i) raw.push_back({pts[2 * i], pts[2 * i + 1]});
  return IntervalSet::normalize(std::move(raw));
}

const double kLog2_3_2 = std::log2(1.5);

void exact_identities(Checks& c, const AcceptanceOptions& opts) {
  Rng rng(Rng::derive(opts.seed, 1));
  const auto mu = lebesgue_measure();
  const double params[] = {-0.7, -0.3, 0.3, 0.7};
  const std::size_t n = 10;
  for (const char* name : {"tent", "halving", "doubling"}) {
    const auto map = builtin_map(name);
    double fe_excess = -1.0;
    double schur_excess = -1.0;
    double cor_excess = -1.0;
    double defect = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto set = random_set(rng);
      for (double p : params) {
        const auto fe = functional_equation_residual(map, mu, set, p, n);
        fe_excess = std::max(fe_excess, fe.residual - fe.tolerance);
        const auto cor = corollary_identity_check(map, mu, set, p, n);
        cor_excess = std::max(cor_excess, cor.residual - cor.bound);
        defect = std::max(defect, cor.identity_defect);
      }
      const auto sc = schur_identity_residual(map, mu, set, n);
      schur_excess = std::max(schur_excess, sc.residual - sc.tolerance);
    }
    const std::string m(name);
    c.at_most(m + " functional-eq residual-tolerance", fe_excess, 0.0);
    c.at_most(m + " schur residual-tolerance", schur_excess, 0.0);
    c.at_most(m + " corollary residual-bound", cor_excess, 0.0);
    c.at_most(m + " corollary defect", defect, 1e-12);
  }
}

void tent_invariance(Checks& c, const AcceptanceOptions& opts) {
  Rng rng(Rng::derive(opts.seed, 2));
  const auto tent = builtin_map("tent");
  const auto mu = lebesgue_measure();
  EngineOptions eng;
  eng.engine = Engine::geometric;
  // Three components pulled back 20 times give 3 * 2^20 pieces.
  eng.preimage.component_cap = std::size_t{1} << 22;
  double worst = 0.0;
  double worst_avg = 0.0;
  double worst_disc = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto set = random_set(rng);
    const double len = set.total_length();
    const auto seq = pullback_sequence(tent, mu, set, 21, eng);
    for (double v : seq.values) worst = std::max(worst, std::abs(v - len));
    const auto est = invariant_measure(seq, Method::both);
    worst_avg = std::max({worst_avg, std::abs(*est.cesaro - len),
                          std::abs(est.abel->extrapolated - len)});
    worst_disc = std::max(worst_disc, *est.discrepancy);
  }
  c.at_most("max|c_k-|A||", worst, 1e-12);
  c.at_most("max|avg-|A||", worst_avg, 1e-12);
  c.at_most("max discrepancy", worst_disc, 1e-12);
}

void gauss_golden(Checks& c, const AcceptanceOptions&) {
  const auto gauss = builtin_map("gauss");
  const auto mu = lebesgue_measure();
  Budget budget;
  budget.n = 200;
  budget.engine.engine = Engine::transfer;
  budget.engine.grid_cells = 4096;
  const auto est = invariant_measure(gauss, mu, IntervalSet::single(0.0, 0.5), Method::both, budget);
  c.at_most("|c_10-log2(3/2)|", std::abs(est.sequence.values[10] - kLog2_3_2), 1e-4);
  c.at_most("|cesaro-golden|", std::abs(*est.cesaro - 0.5849625007), 1e-3);
  c.at_most("|abel-golden|", std::abs(est.abel->extrapolated - 0.5849625007), 1e-3);
  c.at_most("|cesaro-abel|", *est.discrepancy, 1e-3);
}

void halving_degenerate(Checks& c, const AcceptanceOptions&) {
  const auto halving = builtin_map("halving");
  const auto mu = lebesgue_measure();
  Budget budget;
  budget.n = 1000;
  for (double a : {0.1, 0.3}) {
    const auto lo = invariant_measure(halving, mu, IntervalSet::single(0.0, a), Method::both, budget);
    c.at_most("|mu(0," + std::to_string(a).substr(0, 3) + ")-1|", std::abs(lo.value - 1.0), 2e-2);
    const auto hi = invariant_measure(halving, mu, IntervalSet::single(a, 1.0), Method::both, budget);
    c.at_most("|mu(" + std::to_string(a).substr(0, 3) + ",1)|", std::abs(hi.value), 2e-2);
  }
  std::vector<IntervalSet> nested;
  for (int j = 1; j <= 8; ++j) nested.push_back(IntervalSet::single(0.0, 1.0 / j));
  const auto profile = additivity_diagnostic(halving, mu, nested, 1000);
  c.at_least("min additivity profile", *std::min_element(profile.begin(), profile.end()), 0.9);
}

void expansion_identities(Checks& c, const AcceptanceOptions& opts) {
  Rng rng(Rng::derive(opts.seed, 5));
  double lin = 0.0;
  double sq = 0.0;
  double self = 0.0;
  double spread_excess = -1.0;
  const double ss[] = {-0.5, 0.0, 0.3, 0.49};
  for (int i = 0; i < 10'000; ++i) {
    const double x = std::ldexp(static_cast<double>(rng.next() % (std::uint64_t{1} << 30)), -30);
    const double f = 2.0 * x - x * x;
    lin = std::max(lin, std::abs(tent_series(x, {0.25, 1, 40}).value - f));
    sq = std::max(sq, std::abs(tent_series(x, {0.5, 2, 40}).value - f));
    const double tx = x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x;
    self = std::max(self, std::abs(takagi_xi(x, 60).value - x - 0.5 * takagi_xi(tx, 60).value));
    if (i % 10 == 0) {
      for (double s1 : ss) {
        for (double s2 : ss) {
          const auto a = general_decomposition(x, s1, 60);
          const auto b = general_decomposition(x, s2, 60);
          spread_excess = std::max(spread_excess, std::abs(a.value - b.value) - a.truncation_bound -
                                                      b.truncation_bound - 1e-15);
        }
      }
    }
  }
  c.at_most("sup|quarter series-f|", lin, 1e-10);
  c.at_most("sup|half square series-f|", sq, 1e-10);
  c.at_most("decomposition spread-bounds", spread_excess, 0.0);
  c.at_most("takagi self-similarity", self, 1e-12);
}

void spectral_suite(Checks& c, const AcceptanceOptions&) {
  const auto mu = lebesgue_measure();
  const std::size_t order = 256;
  const std::size_t n = 1024;
  struct Fixture {
    const char* label;
    PullbackSequence seq;
  };
  std::vector<Fixture> fixtures;
  EngineOptions transfer;
  transfer.engine = Engine::transfer;
  fixtures.push_back({"tent(0,.5)", pullback_sequence(builtin_map("tent"), mu,
                                                       IntervalSet::single(0, 0.5), n, transfer)});
  fixtures.push_back({"gauss(0,.5)", pullback_sequence(builtin_map("gauss"), mu,
                                                        IntervalSet::single(0, 0.5), n, transfer)});
  fixtures.push_back({"logistic(0,.25)",
                      pullback_sequence(builtin_map("logistic"), mu, IntervalSet::single(0, 0.25),
                                        n, transfer)});
  for (double b : {0.1, 0.3}) {
    fixtures.push_back({b == 0.1 ? "halving(.1,1)" : "halving(.3,1)",
                        pullback_sequence(builtin_map("halving"), mu, IntervalSet::single(b, 1.0), n)});
  }
  fixtures.push_back({"halving(0,.1)", pullback_sequence(builtin_map("halving"), mu,
                                                          IntervalSet::single(0.0, 0.1), n)});
  fixtures.push_back({"constant", PullbackSequence::from_values(std::vector<double>(n, 1.0))});

  double atom_excess = -1.0;
  for (const auto& f : fixtures) {
    const auto est = spectral_estimate(f.seq, order);
    double roundtrip = 0.0;
    for (std::size_t k = 0; k <= 64; ++k) {
      roundtrip = std::max(roundtrip, std::abs(est.reconstructed_value(k) - f.seq.values[k]));
    }
    const std::string label = f.label;
    c.at_least(label + " min Fejer density", est.min_density, -1e-12);
    c.at_most(label + " moment roundtrip k<=64", roundtrip, 5e-3);
    atom_excess = std::max(atom_excess, std::abs(2.0 * est.atom.window_value - est.abel.extrapolated) -
                                            2.0 * (est.atom.uncertainty + est.atom.window_uncertainty));
  }
  c.at_most("|2 window atom-abel|-uncertainty", atom_excess, 0.0);

  const auto est = spectral_estimate(fixtures.back().seq, order);
  const double pi = std::numbers::pi;
  double window_err = 0.0;
  const std::pair<double, double> windows[] = {
      {0.0, pi / 8}, {pi / 8, pi / 2}, {pi / 2, pi}, {pi, 2 * pi - pi / 8}, {0.0, 2 * pi}};
  for (const auto& [lo, hi] : windows) {
    const double analytic = (lo <= 0.0 || hi >= 2 * pi ? 0.5 : 0.0) + 0.5 * (hi - lo) / (2 * pi);
    window_err = std::max(window_err, std::abs(est.window_mass(lo, hi) - analytic));
  }
  c.at_most("constant sigma window mass error", window_err, 1e-2);
}

void birkhoff_gauss(Checks& c, const AcceptanceOptions& opts) {
  const auto table = gauss_digit_frequencies(2, 1'000'000, std::numbers::pi - 3.0);
  c.flag("orbit nondegenerate", !table.degenerate);
  c.at_most("|freq(1)-log2(4/3)|", std::abs(table.rows[0].empirical - std::log2(4.0 / 3.0)), 5e-3);
  c.at_most("|freq(2)-log2(9/8)|", std::abs(table.rows[1].empirical - std::log2(9.0 / 8.0)), 5e-3);
  const auto dual = duality_check(builtin_map("gauss"), lebesgue_measure(),
                                  [](double x) { return x > 0.0 && x < 0.5 ? 1.0 : 0.0; }, 200,
                                  2000, Rng::derive(opts.seed, 7));
  c.at_most("duality gap", dual.gap, 1e-2);
}

void logistic_cross(Checks& c, const AcceptanceOptions& opts) {
  const auto logistic = builtin_map("logistic");
  const auto mu = lebesgue_measure();
  const auto set = IntervalSet::single(0.0, 0.25);
  const double oracle = 2.0 / std::numbers::pi * std::asin(std::sqrt(0.25));
  Budget mc;
  mc.n = 1000;
  mc.engine.engine = Engine::montecarlo;
  mc.engine.samples = 1'000'000;
  mc.engine.seed = Rng::derive(opts.seed, 8);
  const auto a = invariant_measure(logistic, mu, set, Method::cesaro, mc);
  Budget tr;
  tr.n = 1000;
  tr.engine.engine = Engine::transfer;
  const auto b = invariant_measure(logistic, mu, set, Method::cesaro, tr);
  c.at_most("|mc-1/3|", std::abs(a.value - oracle), 3e-3);
  c.at_most("|mc-transfer|", std::abs(a.value - b.value), 5e-3);
}

const char* kNames[kCriteria] = {
    "exact-identities", "tent-invariance",  "gauss-kuzmin-golden",
    "halving-degenerate", "expansion-identities", "spectral-suite",
    "birkhoff-gauss",   "logistic-cross-engine", "verify-all-runtime"};

using Runner = void (*)(Checks&, const AcceptanceOptions&);
const Runner kRunners[kCriteria - 1] = {exact_identities, tent_invariance,      gauss_golden,
                                        halving_degenerate, expansion_identities, spectral_suite,
                                        birkhoff_gauss,   logistic_cross};
const double kBudgetSeconds[kCriteria - 1] = {10.0, 0.0, 5.0, 0.0, 0.0, 0.0, 30.0, 0.0};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id >= kCriteria) throw DomainError("criterion id must be in 1..8");
  CriterionResult r;
  r.id = id;
  r.name = kNames[id - 1];
  Checks checks;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    kRunners[id - 1](checks, opts);
  } catch (const std::exception& e) {
    checks.flag(std::string("exception: ") + e.what(), false);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (kBudgetSeconds[id - 1] > 0.0) checks.at_most("seconds", r.seconds, kBudgetSeconds[id - 1]);
  r.passed = checks.ok();
  r.detail = checks.text();
  return r;
}

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts, const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  double total = 0.0;
  for (int id = 1; id < kCriteria; ++id) {
    out.push_back(run_criterion(id, opts));
    total += out.back().seconds;
    if (progress) progress(out.back());
  }
  CriterionResult last;
  last.id = kCriteria;
  last.name = kNames[kCriteria - 1];
  last.seconds = total;
  Checks checks;
  checks.at_most("suite seconds", total, 120.0);
  last.passed = checks.ok();
  last.detail = checks.text();
  out.push_back(last);
  if (progress) progress(last);
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s %d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace imf::app
