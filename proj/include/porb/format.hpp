#pragma once

#include <cstdio>
#include <string>

namespace porb {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace porb
