#pragma once

// Subcommand execution for the command-line front end.

#include <iosfwd>
#include <string>
#include <vector>

#include "wreathlab/config.hpp"

namespace wreathlab {

enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kResource = 3, kIntegrity = 4 };

// Runs cfg.command. Word-based commands read words from `in` (one query per
// line; `#` starts a comment); results go to `out` and, for batch commands,
// to files under cfg.out_dir. Errors are reported on `err` and mapped to
// the exit codes above.
int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err);

// CSV helpers shared with the report command.
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::string format_double(double x);

}  // namespace wreathlab
