#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace auxnet {

// Shortest decimal text that parses back to exactly `x`.
inline std::string format_real(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Whole-token parse; returns false on trailing garbage or empty input.
inline bool parse_real(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

}  // namespace auxnet
