#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace ostrovsky {

/// 17 significant digits, the round-trip precision of a double.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ostrovsky
