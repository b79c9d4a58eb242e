#pragma once

#include <cstdio>
#include <string>

namespace gnet {

/// Shortest fixed formatting that round-trips every double: 17
/// significant digits, C locale.
inline std::string g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace gnet
