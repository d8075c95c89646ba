#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace qsd {

// Reals in CSV output use 12 significant digits.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string{};
}

}  // namespace qsd
