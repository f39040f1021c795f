#pragma once

#include <iosfwd>

namespace lexaudit {

/// Exit codes: 0 success, 1 usage or validation error, 2 I/O or parse error.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Entry point for the command-line tool. Data goes to `out` (or --out
/// files), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lexaudit
