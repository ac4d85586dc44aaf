#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graces::cli {

enum ExitCode : int {
    kSuccess = 0,
    kValidationError = 1,
    kIoError = 2,
    kNumericalFailure = 3,
};

// Runs `graces <subcommand> ...`; args[0] is the program name. Machine
// output goes to `out` (unless --output is given), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graces::cli
