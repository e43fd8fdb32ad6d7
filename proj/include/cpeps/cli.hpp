#pragma once

// Command-line driver. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure, 4 I/O failure.

#include <string>
#include <vector>

#include "cpeps/common.hpp"

namespace cpeps {

int exit_code(ErrorKind kind) noexcept;

int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace cpeps
