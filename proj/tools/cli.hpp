#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fraclab::cli {

/// Entry point of the `fraclab` tool; `args` excludes the program name.
/// Prints the JSON report to `out` and diagnostics to `err`, and returns
/// the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclab::cli
