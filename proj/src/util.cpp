// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "corpusforge/util.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace corpusforge {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string format_fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, decimals);
    return std::string(buf.data(), end);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace corpusforge

namespace corpusforge {

std::optional<char32_t> last_code_point(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::size_t start = s.size() - 1;
    // Walk back over continuation bytes (10xxxxxx), at most three.
    while (start > 0 && s.size() - start < 4 &&
           (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80)
        --start;
    const auto lead = static_cast<unsigned char>(s[start]);
    const std::size_t len = s.size() - start;
    std::size_t expect = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3
                                       : (lead >> 3) == 0x1E ? 4 : 0;
    if (expect != len) return static_cast<char32_t>(static_cast<unsigned char>(s.back()));
    if (len == 1) return lead;
    char32_t cp = lead & (0x7F >> len);
    for (std::size_t i = start + 1; i < s.size(); ++i)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
    return cp;
}

}  // namespace corpusforge
