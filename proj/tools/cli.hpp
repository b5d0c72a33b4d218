#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace comkex::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kInvalidInput = 3,
    kAttackFailed = 4,
    kTransport = 5,
};

/// Runs one CLI invocation. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace comkex::cli
