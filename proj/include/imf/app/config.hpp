#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "imf/dynamics.hpp"
#include "imf/error.hpp"
#include "imf/interval_set.hpp"
#include "imf/measures.hpp"
#include "imf/mgf.hpp"
#include "imf/pullback.hpp"

namespace imf::app {

/// Invalid configuration; `field` names the offending flag.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error("invalid --" + field + ": " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string map = "tent";
  std::string map_file;  // breakpoint table; overrides `map`
  std::string measure = "lebesgue";
  std::string measure_file;  // `x rho` samples; overrides `measure`
  std::string set = "0:0.5";
  std::string engine;  // empty: per-map default
  std::string method = "both";
  std::size_t n = 200;
  std::size_t order = 256;
  std::size_t grid = 4096;
  std::size_t samples = 100'000;
  double lambda = 0.5;
  double s = 0.5;
  std::uint64_t seed = 0x5eed;
  std::string format = "csv";
  std::string out;

  // birkhoff, digits, duality, expand
  double x0 = 0.14159265358979312;  // pi - 3
  std::string function = "x";
  std::size_t k_max = 10;
  std::size_t sets = 8;  // additivity: A_j = (0, 1/j), j <= sets
  std::string what = "xi";
  std::size_t points = 1024;
  std::size_t terms = 60;

  [[nodiscard]] nlohmann::json to_json() const;

  /// Each throws ConfigError naming the field it could not resolve.
  [[nodiscard]] PiecewiseMap resolve_map() const;
  [[nodiscard]] DensityMeasure resolve_measure() const;
  [[nodiscard]] IntervalSet resolve_set() const;
  [[nodiscard]] EngineOptions engine_options() const;
  [[nodiscard]] Method resolve_method() const;
  [[nodiscard]] std::function<double(double)> resolve_function() const;
};

/// Test functions by name: one, x, x2, ind:lo:hi (indicator of (lo, hi]).
std::function<double(double)> parse_function(const std::string& name);

}  // namespace imf::app
