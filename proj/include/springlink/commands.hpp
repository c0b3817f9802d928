// Command-line front end: analyze, sweep, family, solution-space, prototype.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace springlink::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

/// Parses `args` (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace springlink::cli
