#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpcal::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fpcal::cli
