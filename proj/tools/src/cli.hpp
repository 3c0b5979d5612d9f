#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scalred::cli {

/// Exit codes of the command-line tool.
enum Exit : int { ok = 0, failed = 1, usage = 2 };

/// Runs the tool on `args` (program name excluded) with the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "SCALRED_OUTPUT_DIR";

}  // namespace scalred::cli
