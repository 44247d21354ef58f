#include "imf/app/commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "imf/app/acceptance.hpp"
#include "imf/birkhoff.hpp"
#include "imf/expansions.hpp"
#include "imf/mgf.hpp"
#include "imf/spectral.hpp"

namespace imf::app {

namespace {

using nlohmann::json;

Record base_record(const ExperimentConfig& cfg, std::vector<std::string> columns) {
  Record r;
  r.config = cfg.to_json();
  r.columns = std::move(columns);
  return r;
}

json provenance_json(const Provenance& p) {
  return {{"map", p.map},     {"measure", p.measure},         {"set", p.set},
          {"engine", std::string(to_string(p.engine))},       {"seed", p.seed},
          {"grid_cells", p.grid_cells}, {"samples", p.samples}};
}

void require_positive(std::size_t v, const char* field) {
  if (v == 0) throw ConfigError(field, "must be positive");
}

PullbackSequence sequence_for(const ExperimentConfig& cfg, std::size_t n) {
  return pullback_sequence(cfg.resolve_map(), cfg.resolve_measure(), cfg.resolve_set(), n,
                           cfg.engine_options());
}

CommandResult cmd_pullback(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  const auto seq = sequence_for(cfg, cfg.n);
  CommandResult out{base_record(cfg, {"k", "c_k", "bound"})};
  for (std::size_t k = 0; k < seq.size(); ++k) {
    out.record.rows.push_back({static_cast<double>(k), seq.values[k], seq.error_bounds[k]});
  }
  out.record.results = {{"total_mass", seq.total_mass},
                        {"provenance", provenance_json(seq.provenance)}};
  out.record.uncertainties = {{"max_bound", seq.max_error()}};
  return out;
}

CommandResult cmd_cesaro(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  const auto seq = sequence_for(cfg, cfg.n);
  CommandResult out{base_record(cfg, {"n", "cesaro", "bound"})};
  double sum = 0.0;
  double bound = 0.0;
  for (std::size_t m = 1; m <= seq.size(); ++m) {
    sum += seq.values[m - 1];
    bound += seq.error_bounds[m - 1];
    const double md = static_cast<double>(m);
    out.record.rows.push_back({md, sum / md, bound / md});
  }
  out.record.results = {{"value", cesaro(seq, cfg.n)},
                        {"provenance", provenance_json(seq.provenance)}};
  out.record.uncertainties = {{"engine_bound", cesaro_engine_bound(seq, cfg.n)}};
  return out;
}

CommandResult cmd_mgf(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  if (!(std::abs(cfg.lambda) < 1.0)) throw ConfigError("lambda", "must satisfy |lambda| < 1");
  const auto seq = sequence_for(cfg, cfg.n);
  CommandResult out{base_record(cfg, {"n", "partial_sum", "truncation_bound", "engine_bound"})};
  MgfValue last;
  for (std::size_t m = 1; m <= seq.size(); ++m) {
    last = mgf_partial(seq, cfg.lambda, m);
    out.record.rows.push_back(
        {static_cast<double>(m), last.value, last.truncation_bound, last.engine_bound});
  }
  out.record.results = {{"value", last.value}, {"lambda", cfg.lambda}};
  out.record.uncertainties = {{"truncation_bound", last.truncation_bound},
                              {"engine_bound", last.engine_bound}};
  return out;
}

json abel_json(const AbelEstimate& a) {
  return {{"lambda_grid", a.lambda_grid},
          {"raw", a.raw},
          {"extrapolated", a.extrapolated},
          {"uncertainty", a.uncertainty}};
}

CommandResult cmd_abel(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  const auto seq = sequence_for(cfg, cfg.n);
  const auto est = abel_estimate(seq, abel_grid(seq.size(), seq.total_mass));
  CommandResult out{base_record(cfg, {"lambda", "abel_mean"})};
  for (std::size_t j = 0; j < est.lambda_grid.size(); ++j) {
    out.record.rows.push_back({est.lambda_grid[j], est.raw[j]});
  }
  out.record.results = {{"extrapolated", est.extrapolated}, {"lambda_grid", est.lambda_grid}};
  out.record.uncertainties = {{"uncertainty", est.uncertainty}};
  return out;
}

CommandResult cmd_invariant(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  Budget budget;
  budget.n = cfg.n;
  budget.engine = cfg.engine_options();
  const auto est = invariant_measure(cfg.resolve_map(), cfg.resolve_measure(), cfg.resolve_set(),
                                     cfg.resolve_method(), budget);
  CommandResult out{base_record(cfg, {"n", "value", "uncertainty"})};
  out.record.rows.push_back({static_cast<double>(est.n), est.value, est.uncertainty});
  json results = {{"value", est.value},
                  {"method", std::string(to_string(est.method))},
                  {"n", est.n},
                  {"provenance", provenance_json(est.sequence.provenance)}};
  json unc = {{"value", est.uncertainty}};
  if (est.cesaro) {
    results["cesaro"] = *est.cesaro;
    unc["cesaro"] = *est.cesaro_uncertainty;
  }
  if (est.abel) {
    results["abel"] = abel_json(*est.abel);
    unc["abel"] = est.abel->uncertainty;
  }
  if (est.discrepancy) results["discrepancy"] = *est.discrepancy;
  out.record.results = std::move(results);
  out.record.uncertainties = std::move(unc);
  return out;
}

CommandResult cmd_verify_identities(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  if (!(std::abs(cfg.lambda) < 1.0)) throw ConfigError("lambda", "must satisfy |lambda| < 1");
  if (!(std::abs(cfg.s) < 1.0)) throw ConfigError("s", "must satisfy |s| < 1");
  const auto map = cfg.resolve_map();
  const auto mu = cfg.resolve_measure();
  const auto set = cfg.resolve_set();
  const auto opts = cfg.engine_options();
  const auto fe = functional_equation_residual(map, mu, set, cfg.lambda, cfg.n, opts);
  const auto schur = schur_identity_residual(map, mu, set, cfg.n, opts);
  const auto cor = corollary_identity_check(map, mu, set, cfg.s, cfg.n, opts);
  CommandResult out{base_record(cfg, {"identity", "residual", "tolerance"})};
  out.record.rows = {{0, fe.residual, fe.tolerance},
                     {1, schur.residual, schur.tolerance},
                     {2, cor.residual, cor.bound},
                     {3, cor.identity_defect, 1e-12}};
  out.passed = fe.passed() && schur.passed() && cor.passed();
  out.record.results = {
      {"identities", {"functional_equation", "schur", "corollary", "corollary_defect"}},
      {"functional_equation", fe.residual},
      {"schur", schur.residual},
      {"corollary", cor.residual},
      {"corollary_defect", cor.identity_defect},
      {"passed", out.passed}};
  out.record.uncertainties = {{"functional_equation", fe.tolerance},
                              {"schur", schur.tolerance},
                              {"corollary", cor.bound}};
  return out;
}

CommandResult cmd_additivity(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  require_positive(cfg.sets, "sets");
  std::vector<IntervalSet> sets;
  for (std::size_t j = 1; j <= cfg.sets; ++j) {
    sets.push_back(IntervalSet::single(0.0, 1.0 / static_cast<double>(j)));
  }
  const auto values = additivity_diagnostic(cfg.resolve_map(), cfg.resolve_measure(), sets,
                                            cfg.n, cfg.engine_options());
  CommandResult out{base_record(cfg, {"j", "sup_cesaro"})};
  for (std::size_t j = 0; j < values.size(); ++j) {
    out.record.rows.push_back({static_cast<double>(j + 1), values[j]});
  }
  out.record.results = {{"values", values}};
  return out;
}

CommandResult cmd_spectral(const ExperimentConfig& cfg) {
  require_positive(cfg.order, "order");
  const std::size_t n = std::max(cfg.n, cfg.order + 1);
  const auto seq = sequence_for(cfg, n);
  const auto est = spectral_estimate(seq, cfg.order);
  CommandResult out{base_record(cfg, {"angle", "density", "continuous"})};
  for (std::size_t i = 0; i < est.fejer.angles.size(); ++i) {
    out.record.rows.push_back(
        {est.fejer.angles[i], est.fejer.density[i], est.continuous.density[i]});
  }
  out.record.results = {{"moments", est.moments},
                        {"atom", est.atom.value},
                        {"window_atom", est.atom.window_value},
                        {"atom_consistent", est.atom.consistent},
                        {"total_mass", est.total_mass},
                        {"min_density", est.min_density},
                        {"positive", est.positive},
                        {"abel", abel_json(est.abel)}};
  out.record.uncertainties = {{"atom", est.atom.uncertainty},
                              {"window_atom", est.atom.window_uncertainty},
                              {"symmetry_defect", est.symmetry_defect}};
  return out;
}

CommandResult cmd_expand(const ExperimentConfig& cfg) {
  require_positive(cfg.points, "points");
  std::function<SeriesValue(double)> eval;
  std::function<double(double, double)> residual;
  auto f = [](double x) { return 2.0 * x - x * x; };
  auto tent = [](double x) { return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x; };
  if (cfg.what == "xi") {
    eval = [&](double x) { return takagi_xi(x, cfg.terms); };
    residual = [&](double x, double v) {
      return std::abs(v - x - 0.5 * takagi_xi(tent(x), cfg.terms).value);
    };
  } else if (cfg.what == "linear") {
    eval = [&](double x) { return tent_series(x, {0.25, 1, cfg.terms}); };
    residual = [&](double x, double v) { return std::abs(v - f(x)); };
  } else if (cfg.what == "square") {
    eval = [&](double x) { return tent_series(x, {0.5, 2, cfg.terms}); };
    residual = [&](double x, double v) { return std::abs(v - f(x)); };
  } else if (cfg.what == "decomposition") {
    if (!(std::abs(cfg.s) < 1.0)) throw ConfigError("s", "must satisfy |s| < 1");
    eval = [&](double x) { return general_decomposition(x, cfg.s, cfg.terms); };
    residual = [&](double x, double v) { return std::abs(v - f(x)); };
  } else {
    throw ConfigError("what", "expected xi, linear, square or decomposition");
  }
  CommandResult out{base_record(cfg, {"x", "value", "residual"})};
  double worst = 0.0;
  double bound = 0.0;
  for (std::size_t i = 0; i < cfg.points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(cfg.points);
    const auto v = eval(x);
    const double r = residual(x, v.value);
    worst = std::max(worst, r);
    bound = std::max(bound, v.truncation_bound);
    out.record.rows.push_back({x, v.value, r});
  }
  out.record.results = {{"max_residual", worst}};
  out.record.uncertainties = {{"truncation_bound", bound}};
  return out;
}

CommandResult cmd_birkhoff(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  BirkhoffOptions opts;
  opts.orbit.seed = cfg.seed;
  opts.profile_points = 64;
  if (!(cfg.x0 >= 0.0 && cfg.x0 <= 1.0)) throw ConfigError("x0", "must lie in [0,1]");
  const auto res =
      birkhoff_average(cfg.resolve_map(), cfg.resolve_function(), cfg.x0, cfg.n, opts);
  CommandResult out{base_record(cfg, {"n", "average"})};
  for (const auto& [m, avg] : res.running_profile) {
    out.record.rows.push_back({static_cast<double>(m), avg});
  }
  out.record.results = {{"average", res.average},
                        {"dithered", res.dithered},
                        {"seed", res.seed},
                        {"degenerate", res.degenerate}};
  if (res.degenerate) out.record.results["degenerate_step"] = res.degenerate_step;
  return out;
}

CommandResult cmd_digits(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  require_positive(cfg.k_max, "k-max");
  if (!(cfg.x0 > 0.0 && cfg.x0 < 1.0)) throw ConfigError("x0", "must lie in (0,1)");
  const auto table = gauss_digit_frequencies(cfg.k_max, cfg.n, cfg.x0);
  CommandResult out{base_record(cfg, {"digit", "empirical", "closed_form"})};
  for (const auto& r : table.rows) {
    out.record.rows.push_back({static_cast<double>(r.digit), r.empirical, r.closed_form});
  }
  out.record.results = {{"degenerate", table.degenerate}};
  // Statistical scale of one frequency estimate (ignores orbit correlation).
  out.record.uncertainties = {{"binomial_scale", 0.5 / std::sqrt(static_cast<double>(cfg.n))}};
  return out;
}

CommandResult cmd_duality(const ExperimentConfig& cfg) {
  require_positive(cfg.n, "n");
  if (cfg.samples < 2) throw ConfigError("samples", "needs at least 2");
  auto engine = cfg.engine_options();
  const auto res = duality_check(cfg.resolve_map(), cfg.resolve_measure(), cfg.resolve_function(),
                                 cfg.n, cfg.samples, cfg.seed, engine);
  CommandResult out{base_record(cfg, {"lhs", "rhs", "gap", "uncertainty"})};
  out.record.rows.push_back({res.lhs, res.rhs, res.gap, res.uncertainty});
  out.passed = res.gap <= res.uncertainty;
  out.record.results = {{"lhs", res.lhs}, {"rhs", res.rhs}, {"gap", res.gap}, {"passed", out.passed}};
  out.record.uncertainties = {{"gap", res.uncertainty}};
  return out;
}

CommandResult cmd_verify_all(const ExperimentConfig& cfg) {
  CommandResult out{base_record(cfg, {"criterion", "passed", "seconds"})};
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  const auto results = run_acceptance(opts);
  json details = json::array();
  for (const auto& r : results) {
    out.record.rows.push_back({static_cast<double>(r.id), r.passed ? 1.0 : 0.0, r.seconds});
    details.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed},
                       {"detail", r.detail}});
    out.passed = out.passed && r.passed;
  }
  out.record.results = {{"criteria", details}, {"passed", out.passed}};
  return out;
}

using Handler = CommandResult (*)(const ExperimentConfig&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"pullback", cmd_pullback},
      {"cesaro", cmd_cesaro},
      {"mgf", cmd_mgf},
      {"abel", cmd_abel},
      {"invariant", cmd_invariant},
      {"verify-identities", cmd_verify_identities},
      {"additivity", cmd_additivity},
      {"spectral", cmd_spectral},
      {"expand", cmd_expand},
      {"birkhoff", cmd_birkhoff},
      {"digits", cmd_digits},
      {"duality", cmd_duality},
      {"verify-all", cmd_verify_all},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "pullback", "cesaro",   "mgf",      "abel",   "invariant", "verify-identities", "additivity",
      "spectral", "expand",   "birkhoff", "digits", "duality",   "verify-all"};
  return names;
}

CommandResult run_command(const std::string& name, const ExperimentConfig& config) {
  const auto& table = handlers();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("command", "unknown subcommand '" + name + "'");
  return it->second(config);
}

int run(const std::string& name, const ExperimentConfig& config, std::ostream& out,
        std::ostream& err) {
  try {
    const Format format = parse_format(config.format);
    const auto result = run_command(name, config);
    emit(result.record, format, config.out, out);
    if (!result.passed) {
      err << name << ": tolerance check failed\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << name << " failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace imf::app
