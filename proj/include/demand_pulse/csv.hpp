#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace demand_pulse {

/// Streaming RFC 4180 reader: quoted fields, doubled quotes, embedded
/// newlines, CRLF. Holds one record in memory at a time.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    /// 1-based physical line on which the last returned record started.
    [[nodiscard]] std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
};

/// Column lookup over a header record.
class CsvHeader {
public:
    explicit CsvHeader(std::vector<std::string> names);

    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    /// Throws SchemaError naming the column and `source` when absent.
    [[nodiscard]] std::size_t require(std::string_view name, std::string_view source) const;
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
};

/// Shortest representation that round-trips to the same double.
[[nodiscard]] std::string format_real(double v);

/// Quotes a field when it contains a comma, quote, or newline.
[[nodiscard]] std::string csv_escape(std::string_view field);

[[nodiscard]] std::string_view trim_view(std::string_view s) noexcept;
[[nodiscard]] std::optional<double> parse_real(std::string_view s);
[[nodiscard]] std::optional<long long> parse_integer(std::string_view s);

}  // namespace demand_pulse
