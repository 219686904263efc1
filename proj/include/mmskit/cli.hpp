#pragma once

#include <iosfwd>

namespace mmskit::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kBudget = 3,
    kGuarantee = 4,
};

/// Runs the command line tool. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmskit::cli
