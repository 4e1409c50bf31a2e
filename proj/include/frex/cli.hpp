#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frex::cli {

enum ExitCode : int { kSuccess = 0, kInvalidInput = 1, kUsage = 2 };

// Entry point of the frex binary. args excludes the program name. Results go
// to --out paths (or out when a command allows stdout); diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frex::cli
