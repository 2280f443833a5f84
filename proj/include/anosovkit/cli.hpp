#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace anosovkit::cli {

enum ExitCode : int { Success = 0, Rejected = 1, Undecided = 2, Usage = 3 };

/// Runs one subcommand. args excludes the program name. Reports go to `out`
/// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace anosovkit::cli
