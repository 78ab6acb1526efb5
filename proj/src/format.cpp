#include "sgpv/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace sgpv {

std::string format_number(double value, int digits) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
    return buf.data();
}

std::string format_exact(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

}  // namespace sgpv
