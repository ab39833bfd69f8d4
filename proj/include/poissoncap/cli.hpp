// Command-line front end: solve, sweep, verify, bounds, demo-oscillation.
#pragma once

#include <string>
#include <vector>

namespace poissoncap::cli {

// Runs one subcommand. args excludes the program name.
// Exit codes: 0 success, 1 verification/convergence failure, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace poissoncap::cli
