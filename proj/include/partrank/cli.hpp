#pragma once

#include <cstdint>
#include <iosfwd>

namespace partrank {

enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_rejected = 2 };

/// PARTRANK_BUDGET when set, else `fallback`.
std::uint64_t budget_from_env(std::uint64_t fallback);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace partrank
