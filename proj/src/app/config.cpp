#include "imf/app/config.hpp"

#include <fstream>
#include <sstream>

namespace imf::app {

namespace {

std::string read_file(const std::string& field, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {
      {"map", map_file.empty() ? map : "file:" + map_file},
      {"measure", measure_file.empty() ? measure : "file:" + measure_file},
      {"set", set},
      {"method", method},
      {"n", n},
      {"order", order},
      {"grid", grid},
      {"samples", samples},
      {"lambda", lambda},
      {"s", s},
      {"seed", seed},
      {"x0", x0},
      {"function", function},
      {"k_max", k_max},
      {"sets", sets},
      {"what", what},
      {"points", points},
      {"terms", terms},
  };
  try {
    j["engine"] = std::string(to_string(engine_options().engine.value_or(
        default_engine(resolve_map()))));
  } catch (const Error&) {
    j["engine"] = engine;
  }
  return j;
}

PiecewiseMap ExperimentConfig::resolve_map() const {
  try {
    if (!map_file.empty()) return PiecewiseMap::from_breakpoint_text(map_file, read_file("map-file", map_file));
    return builtin_map(map);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(map_file.empty() ? "map" : "map-file", e.what());
  }
}

DensityMeasure ExperimentConfig::resolve_measure() const {
  try {
    if (!measure_file.empty()) {
      return measure_from_sample_text(measure_file, read_file("measure-file", measure_file));
    }
    return builtin_measure(measure);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(measure_file.empty() ? "measure" : "measure-file", e.what());
  }
}

IntervalSet ExperimentConfig::resolve_set() const {
  try {
    return IntervalSet::parse(set);
  } catch (const Error& e) {
    throw ConfigError("set", e.what());
  }
}

EngineOptions ExperimentConfig::engine_options() const {
  EngineOptions opts;
  if (!engine.empty()) {
    try {
      opts.engine = parse_engine(engine);
    } catch (const Error& e) {
      throw ConfigError("engine", e.what());
    }
  }
  if (grid < 4) throw ConfigError("grid", "needs at least 4 cells");
  opts.grid_cells = grid;
  if (samples == 0) throw ConfigError("samples", "must be positive");
  opts.samples = samples;
  opts.seed = seed;
  return opts;
}

Method ExperimentConfig::resolve_method() const {
  try {
    return parse_method(method);
  } catch (const Error& e) {
    throw ConfigError("method", e.what());
  }
}

std::function<double(double)> ExperimentConfig::resolve_function() const {
  try {
    return parse_function(function);
  } catch (const Error& e) {
    throw ConfigError("f", e.what());
  }
}

std::function<double(double)> parse_function(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "x") return [](double x) { return x; };
  if (name == "x2") return [](double x) { return x * x; };
  if (name.rfind("ind:", 0) == 0) {
    const auto set = IntervalSet::parse(name.substr(4));
    if (set.size() != 1) throw DomainError("indicator needs exactly one interval lo:hi");
    const double lo = set.components()[0].lo;
    const double hi = set.components()[0].hi;
    return [lo, hi](double x) { return x > lo && x <= hi ? 1.0 : 0.0; };
  }
  throw DomainError("unknown function '" + name + "' (expected one, x, x2, ind:lo:hi)");
}

}  // namespace imf::app
