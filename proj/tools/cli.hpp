#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppgw::cli {

/// Exit codes of the ppgw command.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kNonConvergence = 3,
};

/// Environment variable naming the default output directory for `tables`.
inline constexpr const char* kOutputDirEnv = "PPGW_OUTPUT_DIR";

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppgw::cli
