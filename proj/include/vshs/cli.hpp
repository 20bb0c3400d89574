#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vshs::cli {

/// Exit codes: 0 success, 1 validation or invariant failure, 2 I/O or parse error.
enum ExitCode : int { kOk = 0, kValidation = 1, kInput = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vshs::cli
