#pragma once

#include <string>
#include <vector>

namespace fopid::cli {

// Exit codes: 0 success, 2 invalid data, 3 optimizer failure, 1 anything else.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace fopid::cli
