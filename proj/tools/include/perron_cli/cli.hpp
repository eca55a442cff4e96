#pragma once

#include <iosfwd>

namespace perron::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  ok = 0,
  usage = 1,
  domain_error = 2,
  diverges = 3,
  undetermined = 4,
};

/// Runs the tool with the given arguments (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace perron::cli
