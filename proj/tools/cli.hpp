#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teamlog::cli {

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 true / equivalent / bounded, 1 false /
/// counterexample / violation, 2 usage or evaluation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teamlog::cli
