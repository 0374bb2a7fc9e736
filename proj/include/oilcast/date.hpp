#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace oilcast {

/// Calendar day. All dates in the library are ISO-8601 `YYYY-MM-DD`.
using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`; throws ParseError on anything else (including invalid days).
Date parse_date(std::string_view text);

std::string format_date(const Date& date);

inline Date add_days(const Date& date, int days) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

inline bool is_weekend(const Date& date) {
  const std::chrono::weekday wd{std::chrono::sys_days{date}};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace oilcast
