#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cloiseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the command-line tool. `args[0]` is the program name. Machine-readable
/// output goes to `out`, diagnostics and help to `err` (help requested with
/// --help goes to `out`).
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cloiseg::cli
