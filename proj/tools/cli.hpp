#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rftrap::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kSpecError = 2,
  kIoError = 3,
  kPrecondition = 4,
};

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rftrap::cli
