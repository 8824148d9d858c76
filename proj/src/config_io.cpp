#include "kcomb/config_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "kcomb/error.hpp"

namespace kcomb {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const std::string tmp(s);
  if (tmp.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(tmp.c_str(), &end, 10);
  if (errno != 0 || end != tmp.c_str() + tmp.size()) return false;
  out = v;
  return true;
}

bool parse_real(std::string_view s, double& out) {
  const std::string tmp(s);
  if (tmp.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tmp.c_str(), &end);
  if (errno != 0 || end != tmp.c_str() + tmp.size()) return false;
  out = v;
  return true;
}

}  // namespace

KCombConfig parse_config(std::istream& in) {
  std::vector<LineSpec> lines;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto fail = [&](const std::string& why) {
      throw ConfigParseError("line " + std::to_string(lineno) + ": " + why);
    };
    std::istringstream words{std::string(s)};
    std::string keyword;
    words >> keyword;
    if (keyword != "line") fail("expected 'line', got '" + keyword + "'");
    bool have_m = false, have_p = false;
    LineSpec spec;
    std::string field;
    while (words >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) fail("expected key=value, got '" + field + "'");
      const std::string_view key = std::string_view(field).substr(0, eq);
      const std::string_view value = std::string_view(field).substr(eq + 1);
      if (key == "m" && !have_m) {
        if (!parse_int(value, spec.m)) fail("m must be an integer");
        have_m = true;
      } else if (key == "p" && !have_p) {
        if (!parse_real(value, spec.p)) fail("p must be a decimal number");
        have_p = true;
      } else {
        fail("unexpected field '" + field + "'");
      }
    }
    if (!have_m || !have_p) fail("a line record needs both m= and p=");
    lines.push_back(spec);
  }
  return KCombConfig::from_lines(std::move(lines));
}

KCombConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

KCombConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open '" + path + "'");
  return parse_config(in);
}

std::string format_config(const KCombConfig& config) {
  std::string out;
  for (const auto& l : config.lines()) {
    out += "line m=" + std::to_string(l.m) + " p=" + format_double(l.p) + "\n";
  }
  return out;
}

LineSpec parse_line_shorthand(std::string_view text) {
  const auto colon = text.find(':');
  LineSpec spec;
  if (colon == std::string_view::npos || !parse_int(trim(text.substr(0, colon)), spec.m) ||
      !parse_real(trim(text.substr(colon + 1)), spec.p)) {
    throw ConfigParseError("expected m:p, got '" + std::string(text) + "'");
  }
  return spec;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace kcomb
