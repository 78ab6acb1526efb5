#pragma once

#include <string>

namespace sgpv {

// `digits` significant digits, printf %g style. Infinities print as inf/-inf.
std::string format_number(double value, int digits = 6);

// Shortest representation that parses back to the same double.
std::string format_exact(double value);

}  // namespace sgpv
