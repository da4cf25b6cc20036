#pragma once

#include <cstdio>
#include <string>

namespace pursuit::detail {

// Fixed-width-free numeric formatting used by every CSV/report writer so
// that outputs are byte-reproducible.
inline std::string num(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// "0.5235987756 rad (0.1666666667 pi)"
inline std::string angle(double radians) {
  return num(radians, 10) + " rad (" + num(radians / 3.14159265358979323846, 10) + " pi)";
}

}  // namespace pursuit::detail
