#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace popscope::cli {

/// Runs the command line `args` (without the program name). Returns 0 on
/// success, 1 when inputs fail validation or cannot be read, 2 on usage
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace popscope::cli
