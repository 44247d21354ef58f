#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "imf/app/config.hpp"
#include "imf/app/emit.hpp"

namespace imf::app {

struct CommandResult {
  Record record;
  bool passed = true;  // false: a checked tolerance failed (exit 1)
};

/// All subcommand names, in help order.
const std::vector<std::string>& command_names();

/// Runs one subcommand. Throws ConfigError for bad configuration and
/// imf::Error for failures inside the modules.
CommandResult run_command(const std::string& name, const ExperimentConfig& config);

/// run_command plus emission and exit-code mapping: 0 success, 1 tolerance
/// or numeric failure, 2 configuration error. Diagnostics go to `err`.
int run(const std::string& name, const ExperimentConfig& config, std::ostream& out,
        std::ostream& err);

}  // namespace imf::app
