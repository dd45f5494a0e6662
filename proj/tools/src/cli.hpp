#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spca::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kEstimatorFailure = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Records go to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spca::cli
