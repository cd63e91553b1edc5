#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace triage::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kIoError = 3,
    kValidationError = 4,
    kCompatibilityError = 5,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace triage::cli
