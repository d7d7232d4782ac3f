#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error.

#include <iosfwd>

namespace nonhalt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace nonhalt
