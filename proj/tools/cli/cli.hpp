#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cwphase::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidArguments = 2,
  kNoConvergence = 3,
  kPrecondition = 4,
};

/// Runs one invocation. `args` excludes the program name. Results go to `out`
/// unless --output names a file; errors go to `err` as a one-line JSON object.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cwphase::cli
