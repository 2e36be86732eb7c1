#pragma once

#include <iosfwd>

#include "broadwell/config.hpp"
#include "broadwell/constants.hpp"
#include "broadwell/data.hpp"

namespace broadwell {

/// Exit codes shared by the subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,
    kExitFailed = 2,
    kExitSolveError = 3,
};

struct CheckResult {
    TheoremConstants constants;
    HypothesisVerdict verdict;
    std::vector<EdgeViolation> compatibility;
    std::vector<std::string> regularity;
    double T_end = 0.0;
    bool passed = false;
};

/// Constants and verdict for a configuration: bounded-slab mode on the
/// configured slab, global mode over the first march window and the horizon.
CheckResult run_check(const RunConfig& rc);

/// Horizon in absolute time (resolves multiples of the min-step certificate).
double resolve_T_end(const RunConfig& rc);

/// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace broadwell
