#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jlm::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kOk = 0,           ///< success, or verdict "equal"
  kInputError = 1,
  kNotEqual = 2,
  kInconclusive = 3,
};

/// Run one CLI invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`; with --format json, errors are also written to
/// `out` as a single JSON document.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jlm::cli
