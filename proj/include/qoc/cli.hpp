#pragma once

#include <string>
#include <vector>

namespace qoc::cli {

// Runs the command line (argv-style, without the program name).
// Exit codes: 0 success, 1 numerical failure, 2 invalid input.
int run(std::vector<std::string> args);

}  // namespace qoc::cli
