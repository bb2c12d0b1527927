#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arcfit {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // bad flags, unreadable or malformed input
  kExitFitError = 3,  // well-formed input with no usable fit
};

/// Runs the tool with `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace arcfit
