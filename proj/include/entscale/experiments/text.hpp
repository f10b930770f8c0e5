#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "entscale/errors.hpp"
#include "entscale/linalg/types.hpp"

namespace entscale::experiments {

/// A token together with its 1-based column in the source line.
struct Token {
  std::string text;
  int column = 0;
};

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Whitespace-separated tokens of `line`, columns counted from `offset + 1`.
inline std::vector<Token> tokenize(std::string_view line, int offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), offset + static_cast<int>(start) + 1});
  }
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

/// Full-string strtod; false on trailing garbage or overflow.
inline bool parse_plain_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

/// Real number, optionally in units of pi: `1.5`, `pi`, `-pi/2`, `3pi/2`, `3*pi/4`.
inline bool parse_real(const std::string& text, double& out) {
  const auto p = text.find("pi");
  if (p == std::string::npos) return parse_plain_double(text, out) && std::isfinite(out);
  std::string coeff = text.substr(0, p);
  const std::string rest = text.substr(p + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double c = 1.0;
  if (coeff == "-") c = -1.0;
  else if (coeff == "+") c = 1.0;
  else if (!coeff.empty() && !parse_plain_double(coeff, c)) return false;
  double den = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/' || !parse_plain_double(rest.substr(1), den) || den == 0.0) return false;
  }
  out = c * kPi / den;
  return std::isfinite(out);
}

inline bool parse_integer(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtol(s.c_str(), &end, 10);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

/// Shortest-safe round-trip rendering: 17 significant digits, `.` decimal.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_number(long v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }

}  // namespace entscale::experiments
