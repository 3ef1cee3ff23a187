#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fliess::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kValidationFailure = 2,
    kBudgetExceeded = 3,
};

// Runs one command line (args excludes the program name) and returns the
// exit status. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fliess::cli
