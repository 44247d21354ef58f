#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace imf::app {

struct AcceptanceOptions {
  std::uint64_t seed = 0x5eed;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // measured values against their tolerances
};

constexpr int kCriteria = 9;

/// Criteria 1..8 run their experiments; criterion 9 is the wall-clock
/// budget of the whole suite and only makes sense after the others.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

/// All criteria in order; `progress` is called after each one.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts = {},
    const std::function<void(const CriterionResult&)>& progress = {});

/// "PASS  3 gauss-kuzmin-golden (1.23 s) ..." style summary line.
std::string format_line(const CriterionResult& r);

}  // namespace imf::app
