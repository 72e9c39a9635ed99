#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace fraclab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidation = 2,
  kNumeric = 3,
  kNonconvergence = 4,
};

struct CommandOutput {
  json result;
  std::string headline_name;
  double headline = 0.0;
  std::optional<std::string> csv;
  int exit_code = kSuccess;
};

/// Subcommand names in documentation order.
const std::vector<std::string>& command_names();

/// Run one subcommand on a parsed config. Throws ValidationError or
/// NumericError; nonconvergence is reported through exit_code.
CommandOutput run_command(std::string_view name, const json& config);

/// The full report: command, echoed config, headline and result.
json make_report(std::string_view name, const json& config, const CommandOutput& out);

/// A double as JSON; infinities become the strings "inf" / "-inf".
json real(double value);

}  // namespace fraclab::cli
