#pragma once

#include <ostream>

namespace kfree::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kBudget = 3 };

/// Runs the kfree command line. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kfree::cli
