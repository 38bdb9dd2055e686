#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levels::cli {

// Exit codes: 0 success (every verdict holds), 1 some verdict fails,
// 2 usage or parse error, 3 a cap or precondition was violated.
enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kRefused = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levels::cli
