#pragma once

#include <string>
#include <vector>

namespace kfib::cli {

// Runs the command-line front-end on argv[1..] style arguments and returns
// the process exit code: 0 = completed, 2 = completed with an instability
// certificate (only when --fail-on-unstable is set), 1 = error.
int run(std::vector<std::string> args);

}  // namespace kfib::cli
