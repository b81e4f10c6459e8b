#pragma once

#include <string>
#include <vector>

namespace hhsmc::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_max_iterations = 2,
    exit_time_budget = 3,
    exit_usage = 4,
    exit_numeric = 5,
};

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args);

} // namespace hhsmc::cli
