#include "demand_pulse/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include "demand_pulse/error.hpp"

namespace demand_pulse {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    if (in_.peek() == std::char_traits<char>::eof()) return false;

    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (int c = in_.get(); c != std::char_traits<char>::eof(); c = in_.get()) {
        any = true;
        const char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                quoted = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                if (in_.peek() == '\n') break;
                [[fallthrough]];
            case '\n':
                ++line_;
                fields.push_back(std::move(field));
                return true;
            default:
                field.push_back(ch);
        }
    }
    if (any) fields.push_back(std::move(field));
    return any;
}

CsvHeader::CsvHeader(std::vector<std::string> names) : names_(std::move(names)) {
    for (auto& n : names_) {
        // strip UTF-8 BOM and surrounding blanks
        if (n.size() >= 3 && n.compare(0, 3, "\xEF\xBB\xBF") == 0) n.erase(0, 3);
        n = std::string(trim_view(n));
    }
}

std::optional<std::size_t> CsvHeader::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvHeader::require(std::string_view name, std::string_view source) const {
    if (auto idx = find(name)) return *idx;
    throw Error(ErrorKind::SchemaError,
                "column '" + std::string(name) + "' not found in " + std::string(source));
}

std::string format_real(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string_view trim_view(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

namespace {

// "1,234,567.5" -> "1234567.5"; nullopt when the commas are not thousands groups.
std::optional<std::string> strip_grouping(std::string_view s) {
    const auto point = s.find_first_of(".eE");
    const auto whole = s.substr(0, point);
    const auto first = whole.find(',');
    if (first == std::string_view::npos) return std::nullopt;
    const std::size_t lead = (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) ? 1 : 0;
    if (first == lead || first - lead > 3) return std::nullopt;
    for (std::size_t i = first; i < whole.size(); i += 4) {
        if (whole[i] != ',' || i + 4 > whole.size()) return std::nullopt;
        for (std::size_t k = i + 1; k < i + 4; ++k) {
            if (whole[k] < '0' || whole[k] > '9') return std::nullopt;
        }
    }
    std::string out;
    for (char c : whole) {
        if (c != ',') out.push_back(c);
    }
    if (point != std::string_view::npos) out.append(s.substr(point));
    return out;
}

std::optional<double> parse_plain_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::optional<double> parse_real(std::string_view s) {
    s = trim_view(s);
    if (s.empty()) return std::nullopt;
    if (auto v = parse_plain_real(s)) return v;
    // portal exports sometimes group thousands: "1,234.5"
    if (auto plain = strip_grouping(s)) return parse_plain_real(*plain);
    return std::nullopt;
}

std::optional<long long> parse_integer(std::string_view s) {
    s = trim_view(s);
    if (s.empty()) return std::nullopt;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    // and counts as "12.0" or "1,234"
    auto real = parse_real(s);
    if (!real || std::floor(*real) != *real || std::abs(*real) > 9.0e15) return std::nullopt;
    return static_cast<long long>(*real);
}

}  // namespace demand_pulse
