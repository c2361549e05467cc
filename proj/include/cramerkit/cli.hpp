#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cramer::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSpecError = 2,
  kSolverError = 3,
  kCheckFailed = 4,
};

/// Runs `cramerkit <args...>` (args excludes the program name), writing
/// results to `out` and diagnostics to `err`. Parallelism is capped by the
/// CRAMERKIT_THREADS environment variable when set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thread cap from CRAMERKIT_THREADS; 0 (runtime default) when unset or invalid.
int thread_cap_from_env();

}  // namespace cramer::cli
