#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fop::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDataError = 3,
  kNumerical = 4,
};

/// Entry point of the `fop` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fop::cli
