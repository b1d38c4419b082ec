#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "memscope/core/horizon.hpp"

namespace memscope::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitRejected = 2;

// Parses "15", "3,5,9", "7..22" or mixtures such as "7..10,15".
core::HorizonProfile parse_xi_list(std::string_view text);

// Entry point behind the memscope executable. `args` excludes the program
// name. Never throws; failures map onto the exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memscope::cli
