#pragma once

#include <string>

namespace nlqw {

/// Shortest-stable decimal rendering used in every numeric CSV column:
/// 17 significant digits, so equal doubles always print identically and
/// round-trip exactly.
std::string format_number(double value);

}  // namespace nlqw
