#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace breuil_cli {

/// Runs the command line (args excludes the program name). Returns the exit
/// code: 0 success, 1 validation failure, 2 parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace breuil_cli
