#pragma once

#include <ostream>

namespace iel::cli {

/// Exit codes returned by dispatch.
enum ExitCode : int { ok = 0, failure = 1, config_error = 2, blowup = 3, verification_failure = 4 };

/// Parses one subcommand (run, verify, sweep, fit-decay, report) and executes it.
/// Unknown flags print the usage text to err and return config_error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iel::cli
