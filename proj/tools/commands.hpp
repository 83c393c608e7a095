#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locq::cli {

// Full command dispatch; argv excludes the program name. Returns the
// process exit code: 0 distinguishable/success, 3 indistinguishable,
// 4 inconclusive, 2 input or usage error.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace locq::cli
