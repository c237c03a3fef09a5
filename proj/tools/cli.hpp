#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tunnelkit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInternal = 1,
    kUsage = 2,      // bad arguments or configuration
    kNumerical = 3,  // numerical or physical guard tripped
};

// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tunnelkit::cli
