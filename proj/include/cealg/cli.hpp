#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cealg {

/// Runs the command-line tool on `args` (program name excluded), writing the
/// report to `out` and progress notes to `err`. Returns the exit code:
/// 0 when every check passes, 1 when violations were found, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cealg
