#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mzlaw::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name.
/// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or config error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mzlaw::cli
