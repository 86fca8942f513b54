#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace cdig {

/// Shortest general-format text with 9 significant digits, "." separator
/// regardless of locale; "nan" / "inf" / "-inf" for non-finite values.
inline std::string format_g9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

}  // namespace cdig
