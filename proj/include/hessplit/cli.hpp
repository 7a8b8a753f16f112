#pragma once

#include <iosfwd>

namespace hessplit {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitInternalError = 3 };

/// Entry point for `hessplit analyze|dispatch|sweep|ups|synth`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hessplit
