#include "imf/app/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "imf/app/config.hpp"
#include "imf/error.hpp"

namespace imf::app {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("format", "expected csv or json, got '" + name + "'");
}

std::string render(const Record& record, Format format) {
  if (format == Format::json) {
    nlohmann::json results = record.results;
    results["table"] = {{"columns", record.columns}, {"rows", record.rows}};
    nlohmann::json doc = {{"config", record.config},
                          {"results", std::move(results)},
                          {"uncertainties", record.uncertainties}};
    return doc.dump(2) + "\n";
  }
  std::string out = "# config " + record.config.dump() + "\n";
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) out += ',';
    out += record.columns[i];
  }
  out += '\n';
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += number(row[i]);
    }
    out += '\n';
  }
  return out;
}

Record parse_json_record(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  Record r;
  r.config = doc.at("config");
  r.results = doc.at("results");
  r.uncertainties = doc.at("uncertainties");
  const auto table = r.results.at("table");
  r.columns = table.at("columns").get<std::vector<std::string>>();
  r.rows = table.at("rows").get<std::vector<std::vector<double>>>();
  r.results.erase("table");
  return r;
}

void emit(const Record& record, Format format, const std::string& path, std::ostream& fallback) {
  const std::string text = render(record, format);
  if (path.empty() || path == "-") {
    fallback << text;
    fallback.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error("write to '" + path + "' failed");
}

}  // namespace imf::app
