#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kappa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kReproductionMismatch = 2,
};

/// Runs the `kappa` command line. args[0] is the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace kappa::cli
