#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffusym {

/// Runs one CLI invocation. argv excludes the program name.
/// Exit codes: 0 success, 1 analysis negative (--expect not met),
/// 2 input error, 3 numerical failure.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace diffusym
