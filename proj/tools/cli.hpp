#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stochtaylor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/** Runs one command line (args excludes the program name) and returns the exit code. */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stochtaylor::cli
