#include "demand_pulse/date.hpp"

#include <charconv>
#include <cstdio>

namespace demand_pulse {

namespace {

using namespace std::chrono;

std::optional<int> read_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<Date> checked(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

// hh:mm:ss with optional ".fff" tail
std::optional<seconds> parse_clock(std::string_view s) {
    if (auto dot = s.find('.'); dot != std::string_view::npos) s = s.substr(0, dot);
    if (s.size() != 8 || s[2] != ':' || s[5] != ':') return std::nullopt;
    auto h = read_int(s.substr(0, 2));
    auto mi = read_int(s.substr(3, 2));
    auto se = read_int(s.substr(6, 2));
    if (!h || !mi || !se || *h > 23 || *mi > 59 || *se > 60) return std::nullopt;
    return hours{*h} + minutes{*mi} + seconds{*se};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        auto y = read_int(text.substr(0, 4));
        auto m = read_int(text.substr(5, 2));
        auto d = read_int(text.substr(8, 2));
        if (!y || !m || !d) return std::nullopt;
        return checked(*y, *m, *d);
    }
    if (text.size() == 10 && text[2] == '/' && text[5] == '/') {
        auto m = read_int(text.substr(0, 2));
        auto d = read_int(text.substr(3, 2));
        auto y = read_int(text.substr(6, 4));
        if (!y || !m || !d) return std::nullopt;
        return checked(*y, *m, *d);
    }
    return std::nullopt;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 19) return std::nullopt;
    auto date = parse_date(text.substr(0, 10));
    if (!date) return std::nullopt;
    const char sep = text[10];
    if (sep != ' ' && sep != 'T') return std::nullopt;
    std::string_view rest = text.substr(11);

    if (text[2] == '/') {
        // 12-hour clock with AM/PM suffix
        auto space = rest.find(' ');
        if (space == std::string_view::npos) return std::nullopt;
        std::string_view meridiem = trim(rest.substr(space + 1));
        auto clock = parse_clock(rest.substr(0, space));
        if (!clock) return std::nullopt;
        auto h = duration_cast<hours>(*clock).count();
        if (h < 1 || h > 12) return std::nullopt;
        if (meridiem == "AM" || meridiem == "am") {
            if (h == 12) *clock -= hours{12};
        } else if (meridiem == "PM" || meridiem == "pm") {
            if (h != 12) *clock += hours{12};
        } else {
            return std::nullopt;
        }
        return Timestamp{*date} + *clock;
    }

    if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
    auto clock = parse_clock(rest);
    if (!clock) return std::nullopt;
    return Timestamp{*date} + *clock;
}

std::string format_date(Date d) {
    year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date make_date(int y, unsigned m, unsigned d) { return sys_days{year{y} / month{m} / day{d}}; }

}  // namespace demand_pulse
