// Command-line frontend. `run` is the whole program minus process plumbing so
// tests can drive it in-process.
#ifndef SUMNET_CLI_HPP
#define SUMNET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sumnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumnet::cli

#endif  // SUMNET_CLI_HPP
