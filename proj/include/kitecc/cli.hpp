#pragma once

#include <iosfwd>

namespace kitecc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kPass = 0,
  kChecksFailed = 1,
  kUsage = 2,
};

/// Environment variable that overrides the default tolerance when --tol is absent.
inline constexpr const char* kTolEnv = "KITECC_TOL";

/// Entry point for the `kitecc` tool. Tables go to --out (or `out` when no
/// path is given); diagnostics and the run summary go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kitecc::cli
