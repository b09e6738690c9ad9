#pragma once

#include <ostream>
#include <span>
#include <string>

namespace aclaudit::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInputError = 2,
    kUnknownKey = 3,
    kMismatch = 4,
};

/// Runs one invocation. `args` excludes the program name. Data goes to
/// `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace aclaudit::cli
