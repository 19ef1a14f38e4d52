#pragma once

#include <cstdio>
#include <string>

namespace canonpair {

// Round-trip-safe decimal form used everywhere a real lands in a report or a
// parameter map; 17 significant digits recover the exact double.
inline std::string format_real17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Short human-readable form for map keys like "beta=1.41421".
inline std::string format_real_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return std::string(buf);
}

}  // namespace canonpair
