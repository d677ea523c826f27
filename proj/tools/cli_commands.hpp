#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepdec::cli {

/// Exit codes of the command-line driver.
enum ExitCode : int {
  kSuccess = 0,
  kSolverFailure = 1,
  kInvalidInput = 2,
};

/// Parses argv and runs the selected subcommand. Messages go to `out` and
/// diagnostics to `err`; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepdec::cli
