#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace demand_pulse {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD` or `MM/DD/YYYY`. Returns nullopt on anything else.
[[nodiscard]] std::optional<Date> parse_date(std::string_view text);

/// Parses `MM/DD/YYYY hh:mm:ss AM|PM` (portal export) or ISO-8601
/// `YYYY-MM-DDThh:mm:ss` / `YYYY-MM-DD hh:mm:ss`, with optional fractional
/// seconds that are truncated.
[[nodiscard]] std::optional<Timestamp> parse_timestamp(std::string_view text);

[[nodiscard]] std::string format_date(Date d);

[[nodiscard]] Date make_date(int year, unsigned month, unsigned day);

[[nodiscard]] inline int year_of(Timestamp t) {
    return static_cast<int>(std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(t)}.year());
}

[[nodiscard]] inline Date day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

}  // namespace demand_pulse
