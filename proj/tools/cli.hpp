#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reopen::service {

// Runs the command line (arguments without the program name) and returns the exit code:
// 0 success, 1 invalid configuration, 2 data validation failure, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reopen::service
