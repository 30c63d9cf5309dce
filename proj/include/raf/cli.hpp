#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace raf {

/// Runs the command line (arguments after the program name).
/// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace raf
