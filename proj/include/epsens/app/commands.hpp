#pragma once

// Command-line front end: analyze, sweep and generate.

#include <iosfwd>

namespace epsens::app {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,      // usage, file or parse errors
    kNumericalError = 2,  // numerical failure or an identity check beyond tolerance
};

/// Runs the CLI with the given arguments, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epsens::app
