#pragma once

#include <array>
#include <charconv>
#include <string>

namespace geofd {

// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace geofd
