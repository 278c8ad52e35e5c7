#pragma once

// Shared helpers for the line-oriented file formats.

#include "evmigrate/error.hpp"

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evmigrate::text {

inline constexpr std::string_view whitespace = " \t\r";

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(whitespace);
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(whitespace);
    return s.substr(first, last - first + 1);
}

struct Line {
    int number;
    std::size_t indent; // leading spaces
    std::string_view body; // trimmed remainder
};

/// Splits into lines, dropping blank lines and `#` comment lines.
/// Tabs in the indentation are rejected; indentation is counted in spaces.
inline std::vector<Line> significant_lines(std::string_view source)
{
    std::vector<Line> out;
    int number = 0;
    while (!source.empty()) {
        ++number;
        const auto nl = source.find('\n');
        std::string_view raw = source.substr(0, nl);
        source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);

        const auto body = trim(raw);
        if (body.empty() || body.front() == '#')
            continue;
        const auto indent = raw.find_first_not_of(' ');
        if (raw[indent] == '\t')
            throw ParseError(number, "tab in indentation");
        out.push_back({number, indent, body});
    }
    return out;
}

inline std::vector<std::string_view> tokens(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto first = s.find_first_not_of(whitespace);
        if (first == std::string_view::npos)
            break;
        s.remove_prefix(first);
        const auto end = s.find_first_of(whitespace);
        out.push_back(s.substr(0, end));
        if (end == std::string_view::npos)
            break;
        s.remove_prefix(end);
    }
    return out;
}

/// First whitespace-separated token and the trimmed rest of the line.
inline std::pair<std::string_view, std::string_view> head_and_rest(std::string_view s)
{
    s = trim(s);
    const auto end = s.find_first_of(whitespace);
    if (end == std::string_view::npos)
        return {s, {}};
    return {s.substr(0, end), trim(s.substr(end))};
}

inline std::optional<std::int64_t> parse_int(std::string_view s)
{
    std::int64_t value = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    if (begin != end && *begin == '+')
        return std::nullopt;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return value;
}

/// True if `s` survives a trip through a trimmed to-end-of-line field.
inline bool is_line_safe(std::string_view s)
{
    return s.find_first_of("\n\r") == std::string_view::npos && trim(s).size() == s.size();
}

} // namespace evmigrate::text
