#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace folds::cli {

// Exit codes: the property holds (or output was produced), it fails, or the
// input could not be used.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kInputError = 2;

// Runs one command line. args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace folds::cli
