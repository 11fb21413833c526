// Copyright 2026 The corpusforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace corpusforge {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Fixed number of decimals, for human-facing report values.
std::string format_fixed(double v, int decimals);

// Strict parse: the whole (trimmed) string must be a finite number.
std::optional<double> parse_double(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace corpusforge

namespace corpusforge {

// Last Unicode code point of `s` after trailing whitespace, or nullopt when
// `s` is blank. Invalid UTF-8 yields the raw final byte.
std::optional<char32_t> last_code_point(std::string_view s);

}  // namespace corpusforge
