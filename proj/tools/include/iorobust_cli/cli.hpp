#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace iorobust::cli {

enum ExitCode : int {
  kOk = 0,
  kSolverError = 1,
  kUsageError = 2,
};

// args excludes the program name. Never throws; every failure maps to an exit code
// with a message on err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a..b:step", "a..b" (step 1), "a,b,c" or a single value.
std::vector<std::size_t> parse_range(const std::string& text);

}  // namespace iorobust::cli
