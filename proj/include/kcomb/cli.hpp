#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kcomb::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kCheckFailed = 2;

// Runs one subcommand. `args` excludes the program name. Payloads go to
// `out` unless --output names a file; diagnostics go to `err` as a single
// line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kcomb::cli
