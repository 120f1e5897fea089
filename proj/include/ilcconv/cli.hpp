#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ilcconv::cli {

/// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
int run(int argc, char** argv);

/// Same as above with explicit streams; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ilcconv::cli
