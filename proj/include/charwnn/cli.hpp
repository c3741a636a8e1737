#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace charwnn {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitDivergence = 3,
};

// Entry point of the command-line tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace charwnn
