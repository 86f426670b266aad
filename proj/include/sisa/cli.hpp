/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sisa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitValidation = 4;

/// Entry point of the `sisa` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sisa
