#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcomp {

enum ExitCode : int { exit_ok = 0, exit_invariant_failure = 1, exit_usage = 2 };

/// Runs one command line (without the program name). Artifacts go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qcomp
