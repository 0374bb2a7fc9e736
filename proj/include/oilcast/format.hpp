#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace oilcast {

/// Shortest decimal representation that parses back to the same double.
std::string format_real(double value);

/// Fixed-point rendering with `digits` decimals, locale independent.
std::string format_fixed(double value, int digits);

/// Parses a complete decimal token; throws ParseError (with `line`, if given) otherwise.
double parse_real(std::string_view token, std::size_t line = 0);

/// Splits on `sep` without any quoting rules (the formats we read never quote).
std::vector<std::string_view> split(std::string_view text, char sep);

std::string_view trim(std::string_view text);

}  // namespace oilcast
