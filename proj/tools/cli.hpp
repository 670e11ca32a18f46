#ifndef KFRAME_TOOLS_CLI_HPP
#define KFRAME_TOOLS_CLI_HPP

#include <ostream>

namespace kframe::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kPropertyFails = 2;
inline constexpr int kNotConverged = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kframe::cli

#endif  // KFRAME_TOOLS_CLI_HPP
