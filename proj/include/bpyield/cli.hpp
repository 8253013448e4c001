#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bpyield::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, usage = 1, invalid = 2, not_converged = 3 };

/// Runs one command line (args excludes the program name). Data goes to
/// `out` unless an output file is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpyield::cli
