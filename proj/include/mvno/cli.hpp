#pragma once

#include <iosfwd>

#include "mvno/config.hpp"

/// Batch commands behind the command-line tool. Each takes a validated
/// RunConfig, writes CSV (with '#' comment lines for summaries) to `out`,
/// diagnostics to `err`, and returns the process exit code:
/// 0 success, 1 config error, 2 model infeasibility, 3 verification failure.
namespace mvno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerifyFailed = 3;

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_game(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mvno::cli
