#pragma once

#include <string>
#include <vector>

namespace fracpq {

/// Command-line entry point. Exit codes: 0 success, 2 configuration error,
/// 3 solver non-convergence, 4 precondition or threshold refusal.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace fracpq
