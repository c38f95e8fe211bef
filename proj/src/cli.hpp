#pragma once
#include <ostream>
#include <string>
#include <vector>

namespace dl {

// The full command-line surface. Returns the process exit code:
// 0 = property holds / result printed, 1 = property fails (with witness),
// 2 = input or resource error. Every report ends with a `RESULT:` line.
int runCli(std::vector<std::string> args, std::ostream& out);

}  // namespace dl
