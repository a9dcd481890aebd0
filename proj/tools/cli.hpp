#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soarplan::cli {

/// Exit codes of every subcommand.
inline constexpr int kExitSolved = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoSolution = 2;

/// Runs the command line `args` (program name first). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soarplan::cli
