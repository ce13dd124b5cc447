#include "nlqw/format.hpp"

#include <cstdio>

namespace nlqw {

std::string format_number(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace nlqw
