#pragma once

#include <iosfwd>

namespace smaug::tools {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kAccept = 0, kReject = 1, kError = 2 };

/// Runs the `smaug` command line: enroll, verify, evaluate, inspect, gen and
/// serve. Successful commands other than verify return kAccept.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smaug::tools
