#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seascape {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitEmpty = 3,
};

// Runs the command line `args` (without the program name). Normal output goes to
// `out`, diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seascape
