#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcomp::cli {

/// Runs one command line (without the program name).
///
/// Exit codes: 0 success with every assertion passing, 2 an assertion or solver
/// failure, 1 bad input (malformed files, invalid operators, budget exceeded).
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcomp::cli
