#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctops::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumericalFailure = 2 };

/// Runs one command line (args[0] is the program name). Data goes to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctops::cli
