#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace slogcert::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitIncomplete = 3,
};

/// Runs one command line (without the program name). The JSON report goes
/// to --out if given, else to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slogcert::tools
