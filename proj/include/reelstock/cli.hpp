#pragma once

// Command-line front end. Subcommands: evaluate, search, estimate, compare,
// generate. Exit codes: 0 success, 2 validation or usage error, 3 a scenario
// that cannot be served, 4 internal error.

#include <iosfwd>
#include <string>
#include <vector>

#include "reelstock/evaluate.hpp"

namespace reelstock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUnservable = 3;
inline constexpr int kExitInternal = 4;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Human-readable report without timing.
std::string format_report(const EvaluationResult& result, const std::string& digest);

}  // namespace reelstock::cli
