#pragma once

#include <string>
#include <vector>

namespace meshgap::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage or validation failure.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace meshgap::cli
