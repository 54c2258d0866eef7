#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace qloc {

/// Shortest %.12g rendering of a double; the common currency of every text
/// report this library emits.
inline std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// The double that format_g12's text parses back to. Values passed through
/// quantize12 survive a write/parse cycle bit-exactly.
inline double quantize12(double v) {
  return std::strtod(format_g12(v).c_str(), nullptr);
}

}  // namespace qloc
