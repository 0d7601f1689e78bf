#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace oksvm::detail {

// 17 significant digits: enough for an exact double round trip, and
// locale-independent unlike iostreams.
inline std::string format_double(double value) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, end);
}

// Shortest representation that still round-trips exactly; used for result
// tables where "0.1" reads better than "0.10000000000000001".
inline std::string format_shortest(double value) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

inline std::optional<double> parse_double(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

}  // namespace oksvm::detail
