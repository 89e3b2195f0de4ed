#pragma once

#include <charconv>
#include <string>

namespace midp {

// Shortest decimal form that round-trips; keeps CSV output byte-stable.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace midp
