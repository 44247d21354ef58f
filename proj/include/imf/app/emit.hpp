#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace imf::app {

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// Output of one run: a numeric table plus scalar results and their
/// uncertainties, tagged with the resolved configuration.
struct Record {
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json uncertainties = nlohmann::json::object();

  bool operator==(const Record&) const = default;
};

/// CSV: a `# config ...` comment line, the column header, one line per row.
/// JSON: {"config", "results", "uncertainties"}; the table goes under
/// results.table as {"columns", "rows"}. Both end with a line feed.
std::string render(const Record& record, Format format);

/// Inverse of render(record, Format::json).
Record parse_json_record(const std::string& text);

/// Writes to `path`, or to `fallback` when path is empty or "-". Throws
/// imf::Error on I/O failure.
void emit(const Record& record, Format format, const std::string& path, std::ostream& fallback);

}  // namespace imf::app
