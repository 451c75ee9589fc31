#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dyngreen::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kPropertyViolation = 2,
    kResourceLimit = 3,
};

/// Runs the command line `args` (without the program name), writing the
/// report to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal with at most 15 significant digits.
std::string format_real(double x);

}  // namespace dyngreen::cli
