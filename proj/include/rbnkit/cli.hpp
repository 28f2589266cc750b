#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbnkit::cli {

// Exit codes of the command line tool.
inline constexpr int kYes = 0;
inline constexpr int kNo = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kUsage = 64;
inline constexpr int kBudget = 70;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbnkit::cli
