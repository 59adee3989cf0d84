#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace dsloss {

// Shortest decimal representation that round-trips to the same double
// (std::to_chars). Used for every number written to CSV/JSON artifacts so
// identical values always serialize to identical bytes.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Fixed-precision decimal, used for SVG coordinates where sub-pixel noise
// would only bloat the files.
inline std::string format_fixed(double v, int precision) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

// Minimal CSV field quoting: fields containing a comma, quote or newline
// are wrapped in double quotes with inner quotes doubled.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace dsloss
