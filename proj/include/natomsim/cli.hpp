// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace natomsim {

inline constexpr const char* kToolVersion = "0.1.0";

// Executes one CLI invocation (argv without the program name). Writes JSON and
// CSV outputs under --out-dir and prints a one-line summary. Exit codes:
// 0 success, 1 domain/runtime error, 2 usage error.
int run_command(const std::vector<std::string>& argv);

} // namespace natomsim
