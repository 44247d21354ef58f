// Command-line driver: one subcommand per experiment, shared flags.
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "imf/app/commands.hpp"

namespace {

void add_flags(CLI::App* cmd, imf::app::ExperimentConfig& cfg) {
  cmd->add_option("--map", cfg.map, "tent|baker|gauss|doubling|halving|logistic");
  cmd->add_option("--map-file", cfg.map_file, "piecewise-affine breakpoint table (x y per line)");
  cmd->add_option("--measure", cfg.measure, "lebesgue|gauss");
  cmd->add_option("--measure-file", cfg.measure_file, "density samples (x rho per line)");
  cmd->add_option("--set", cfg.set, "interval set, e.g. 0:0.25,0.5:0.75");
  cmd->add_option("--engine", cfg.engine, "geometric|transfer|montecarlo");
  cmd->add_option("--method", cfg.method, "cesaro|abel|both");
  cmd->add_option("--n", cfg.n, "sequence or orbit length");
  cmd->add_option("--order", cfg.order, "Fejer order N");
  cmd->add_option("--grid", cfg.grid, "transfer grid cells");
  cmd->add_option("--samples", cfg.samples, "Monte Carlo samples");
  cmd->add_option("--lambda", cfg.lambda, "generating-function argument");
  cmd->add_option("--s", cfg.s, "series / corollary weight");
  cmd->add_option("--seed", cfg.seed, "64-bit seed for every stochastic path");
  cmd->add_option("--x0", cfg.x0, "orbit start");
  cmd->add_option("--f", cfg.function, "test function: one|x|x2|ind:lo:hi");
  cmd->add_option("--k-max", cfg.k_max, "largest continued-fraction digit");
  cmd->add_option("--sets", cfg.sets, "additivity: number of nested sets (0,1/j)");
  cmd->add_option("--what", cfg.what, "expand: xi|linear|square|decomposition");
  cmd->add_option("--points", cfg.points, "expand: number of points i/points");
  cmd->add_option("--terms", cfg.terms, "expand: series terms");
  cmd->add_option("--format", cfg.format, "csv|json");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant measures of interval maps via measure generating functions"};
  app.require_subcommand(1);
  imf::app::ExperimentConfig cfg;
  const std::map<std::string, std::string> about = {
      {"pullback", "sequence c_k = mu(phi^-k A) with error bounds"},
      {"cesaro", "running Cesaro averages of the pullback sequence"},
      {"mgf", "partial sums of the measure generating function at --lambda"},
      {"abel", "Abel means on the lambda grid and their extrapolation"},
      {"invariant", "invariant-measure estimate by --method cesaro|abel|both"},
      {"verify-identities", "functional-equation, Schur and telescoping residuals"},
      {"additivity", "sup of Cesaro means over nested sets (0, 1/j)"},
      {"spectral", "Fejer-summed spectral density and atom at zero"},
      {"expand", "tent-map series: --what xi|linear|square|decomposition"},
      {"birkhoff", "orbit average of --f from --x0 with running profile"},
      {"digits", "continued-fraction digit frequencies along a Gauss orbit"},
      {"duality", "orbit averages against the transfer-operator density"},
      {"verify-all", "run every acceptance criterion"}};
  for (const auto& name : imf::app::command_names()) {
    const auto it = about.find(name);
    add_flags(app.add_subcommand(name, it == about.end() ? "" : it->second), cfg);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const auto* sub = app.get_subcommands().front();
  return imf::app::run(sub->get_name(), cfg, std::cout, std::cerr);
}
