#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "kcomb/lattice.hpp"

namespace kcomb {

// Lattice config files are flat text:
//
//   # the classical comb
//   line m=0 p=0.25
//
// one `line` record per horizontal line with an integer level `m` and a
// decimal probability `p` (keys in either order), `#` comments and blank
// lines. Throws ConfigParseError (with the line number) on malformed input
// and the validate_config errors on invalid content.
KCombConfig parse_config(std::istream& in);
KCombConfig parse_config_text(std::string_view text);
KCombConfig load_config(const std::string& path);

// Inverse of parse_config; p is written with 17 significant digits so the
// round trip is exact.
std::string format_config(const KCombConfig& config);

// "m:p" shorthand used on the command line.
LineSpec parse_line_shorthand(std::string_view text);

// Shortest-round-trip-safe decimal (17 significant digits).
std::string format_double(double v);

}  // namespace kcomb
