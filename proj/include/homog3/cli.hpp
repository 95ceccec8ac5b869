#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homog3 {

// Parse and dispatch one command line (without the program name).
// Returns the process exit status: 0 success, 1 validation error,
// 2 numerical failure. Diagnostics go to err as single lines.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace homog3
