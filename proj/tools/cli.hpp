#pragma once

#include <iosfwd>

namespace getme::cli {

enum ExitCode : int { Success = 0, Usage = 2, InputError = 3, NumericalFailure = 4 };

/// Runs one command line invocation; all output goes to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace getme::cli
