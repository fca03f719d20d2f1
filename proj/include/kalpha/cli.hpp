#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kalpha::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;  // usage, config or computation error
inline constexpr int kExitFail = 2;   // a verification ran and failed

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kalpha::cli
