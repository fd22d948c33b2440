#pragma once

#include <string>
#include <vector>

namespace barrenlab::cli {

/// Experiment runner. `args` excludes the program name. Returns 0 on
/// success, 2 on configuration errors (including usage problems), 1 on
/// runtime failures.
int run(const std::vector<std::string>& args);

}  // namespace barrenlab::cli
