#pragma once

#include <ostream>

namespace rmdp::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Human-readable output goes to `out`,
/// diagnostics and usage text to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rmdp::cli
