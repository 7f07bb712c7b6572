#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polymean {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitFailed = 2,    // the bi-criteria program reported FAILED
  kExitSelfCheck = 3, // a result did not pass its own recomputation
};

/// Entry point of the `polymean` tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace polymean
