#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anosov::cli {

enum ExitCode : int { ok = 0, failure = 1, usage = 2 };

// Runs one subcommand. `args` excludes the program name. Reports without an
// output path go to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anosov::cli
