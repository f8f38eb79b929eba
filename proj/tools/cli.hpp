#pragma once

#include <ostream>
#include <span>
#include <string>

namespace permboot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs one command line (args[0] is the program name). JSON goes to `out`,
/// diagnostics and usage text to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace permboot::cli
