#include <doctest.h>

#include <sstream>

#include "imf/app/commands.hpp"
#include "imf/app/config.hpp"
#include "imf/app/emit.hpp"

using namespace imf;
using namespace imf::app;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::string& name, const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(name, cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("empty record renders as a header-only csv") {
  Record r;
  r.columns = {"k", "c_k", "bound"};
  const auto text = render(r, Format::csv);
  const auto ls = lines(text);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0].rfind("# config ", 0) == 0);
  CHECK(ls[1] == "k,c_k,bound");
  CHECK(text.back() == '\n');
}

TEST_CASE("pullback emits k,c_k,bound") {
  ExperimentConfig cfg;
  cfg.map = "halving";
  cfg.set = "0:0.125";
  cfg.n = 5;
  const auto o = run_cli("pullback", cfg);
  CHECK(o.code == 0);
  const auto ls = lines(o.out);
  REQUIRE(ls.size() == 7);
  CHECK(ls[1] == "k,c_k,bound");
  CHECK(ls[2].rfind("0,0.125,", 0) == 0);
  CHECK(ls[6].rfind("4,1,", 0) == 0);
}

TEST_CASE("json round trip") {
  Record r;
  r.config = {{"map", "tent"}, {"n", 3}};
  r.columns = {"a", "b"};
  r.rows = {{1.0, 0.1}, {2.0, 1e-300}, {3.0, -0.3}};
  r.results = {{"value", 0.25}, {"flag", true}};
  r.uncertainties = {{"value", 1e-12}};
  const auto text = render(r, Format::json);
  CHECK(text.back() == '\n');
  const auto parsed = parse_json_record(text);
  CHECK(parsed == r);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.contains("config"));
  CHECK(doc.contains("results"));
  CHECK(doc.contains("uncertainties"));
}

TEST_CASE("command records carry the resolved config") {
  ExperimentConfig cfg;
  cfg.map = "gauss";
  cfg.n = 30;
  cfg.format = "json";
  const auto o = run_cli("invariant", cfg);
  REQUIRE(o.code == 0);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc["config"]["map"] == "gauss");
  CHECK(doc["config"]["n"] == 30);
  CHECK(doc["config"]["seed"] == 0x5eed);
  CHECK(doc["results"].contains("discrepancy"));
  CHECK(doc["uncertainties"].contains("value"));
}

TEST_CASE("every subcommand is deterministic") {
  ExperimentConfig cfg;
  cfg.n = 16;
  cfg.order = 8;
  cfg.samples = 2000;
  cfg.points = 32;
  cfg.k_max = 4;
  cfg.sets = 4;
  for (const auto& name : command_names()) {
    if (name == "verify-all") continue;
    ExperimentConfig c = cfg;
    if (name == "digits") c.n = 10000;
    if (name == "duality") c.map = "logistic";
    INFO(name);
    const auto a = run_cli(name, c);
    const auto b = run_cli(name, c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("exit codes") {
  ExperimentConfig cfg;
  cfg.map = "tent";
  cfg.set = "0:0.5";
  cfg.lambda = 0.7;
  cfg.n = 15;
  CHECK(run_cli("verify-identities", cfg).code == 0);

  ExperimentConfig bad_map = cfg;
  bad_map.map = "nosuchmap";
  const auto o = run_cli("pullback", bad_map);
  CHECK(o.code == 2);
  CHECK(o.err.find("--map") != std::string::npos);

  ExperimentConfig bad_lambda = cfg;
  bad_lambda.lambda = 1.5;
  CHECK(run_cli("mgf", bad_lambda).code == 2);

  ExperimentConfig bad_set = cfg;
  bad_set.set = "0.5:2";
  CHECK(run_cli("pullback", bad_set).code == 2);

  ExperimentConfig bad_format = cfg;
  bad_format.format = "xml";
  CHECK(run_cli("pullback", bad_format).code == 2);

  CHECK(run_cli("frobnicate", cfg).code == 2);

  ExperimentConfig unwritable = cfg;
  unwritable.out = "/nonexistent-dir/out.csv";
  const auto w = run_cli("pullback", unwritable);
  CHECK(w.code == 1);
  CHECK_FALSE(w.err.empty());
}

TEST_CASE("expand xi grid") {
  ExperimentConfig cfg;
  cfg.what = "xi";
  cfg.points = 1024;
  const auto result = run_command("expand", cfg);
  REQUIRE(result.record.rows.size() == 1024);
  CHECK(result.record.rows[0][0] == 0.0);
  CHECK(result.record.rows[0][1] == 0.0);
  CHECK(result.record.rows[512][1] == 1.0);
  CHECK(result.record.results["max_residual"].get<double>() < 1e-12);
}

TEST_CASE("function names") {
  CHECK(parse_function("one")(0.3) == 1.0);
  CHECK(parse_function("x2")(0.5) == 0.25);
  const auto ind = parse_function("ind:0:0.5");
  CHECK(ind(0.25) == 1.0);
  CHECK(ind(0.75) == 0.0);
  ExperimentConfig cfg;
  cfg.function = "cubic";
  CHECK_THROWS_AS((void)cfg.resolve_function(), ConfigError);
}

TEST_CASE("config resolution errors name the field") {
  ExperimentConfig cfg;
  cfg.engine = "warp";
  try {
    (void)cfg.engine_options();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "engine");
  }
  cfg = {};
  cfg.method = "median";
  CHECK_THROWS_AS((void)cfg.resolve_method(), ConfigError);
  cfg = {};
  cfg.measure = "counting";
  CHECK_THROWS_AS((void)cfg.resolve_measure(), ConfigError);
}
