#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jigsolve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSelftest = 4;

// Entry point shared by the jigsolve binary and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestOptions {
  // Swap in a wrong Hungarian tie-break; the suite must then fail.
  bool mutate_tie_break = false;
};

int run_selftest(const SelftestOptions& opts, std::ostream& out);

}  // namespace jigsolve::cli
