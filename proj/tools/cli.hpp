#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrh::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // validation or tolerance failure
inline constexpr int kUsage = 2;    // bad flags or unusable input

/// args excludes the program name. Output goes to `out` unless --output is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrh::cli
