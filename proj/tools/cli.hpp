#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chronoscale::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,  // conditions fail or the stability bound is violated
  kConfigError = 2,
  kRuntimeError = 3,
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chronoscale::cli
