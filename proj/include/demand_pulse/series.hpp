#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demand_pulse/date.hpp"

namespace demand_pulse {

/// Inclusive calendar window.
struct AnalysisPeriod {
    Date start;
    Date end;

    AnalysisPeriod(Date s, Date e);

    [[nodiscard]] bool contains(Date d) const noexcept { return start <= d && d <= end; }
    [[nodiscard]] std::size_t days() const noexcept {
        return static_cast<std::size_t>((end - start).count()) + 1;
    }
    friend bool operator==(const AnalysisPeriod&, const AnalysisPeriod&) = default;
};

/// Ordered (date, value) pairs. Dates strictly increase and values are
/// finite; gaps are allowed until `fill_missing_dates` closes them. An absent
/// date is how a series says "no observation" (e.g. mean distance on a day
/// without trips).
class DateIndexedSeries {
public:
    DateIndexedSeries() = default;
    DateIndexedSeries(std::string label, std::vector<Date> dates, std::vector<double> values,
                      std::string unit = {});

    /// Daily series starting at `start` with one value per consecutive day.
    static DateIndexedSeries contiguous(std::string label, Date start, std::vector<double> values,
                                        std::string unit = {});

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const std::string& unit() const noexcept { return unit_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] Date date_at(std::size_t i) const { return dates_.at(i); }
    [[nodiscard]] double value_at(std::size_t i) const { return values_.at(i); }
    [[nodiscard]] Date first_date() const;
    [[nodiscard]] Date last_date() const;
    [[nodiscard]] bool is_contiguous() const noexcept;
    [[nodiscard]] std::optional<double> find(Date d) const;

    [[nodiscard]] DateIndexedSeries relabeled(std::string label) const;
    [[nodiscard]] DateIndexedSeries with_values(std::vector<double> values) const;

    friend bool operator==(const DateIndexedSeries&, const DateIndexedSeries&) = default;

private:
    std::string label_;
    std::string unit_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

enum class NormalizationMode { ZScore, MinMax, None };

[[nodiscard]] std::string_view to_string(NormalizationMode mode) noexcept;
[[nodiscard]] std::optional<NormalizationMode> parse_normalization(std::string_view text) noexcept;

[[nodiscard]] DateIndexedSeries fill_missing_dates(const DateIndexedSeries& s, double fill);

/// Trailing 7-day mean; the first six days average whatever is available.
[[nodiscard]] DateIndexedSeries rolling_mean_7(const DateIndexedSeries& s);

[[nodiscard]] DateIndexedSeries restrict(const DateIndexedSeries& s, const AnalysisPeriod& p);

/// Population z-score (divides by n).
[[nodiscard]] DateIndexedSeries zscore(const DateIndexedSeries& s);
[[nodiscard]] DateIndexedSeries minmax(const DateIndexedSeries& s);
[[nodiscard]] DateIndexedSeries normalize(const DateIndexedSeries& s, NormalizationMode mode);

[[nodiscard]] DateIndexedSeries cumulative(const DateIndexedSeries& s);
[[nodiscard]] DateIndexedSeries daily_from_cumulative(const DateIndexedSeries& s);

[[nodiscard]] std::pair<DateIndexedSeries, DateIndexedSeries> align_common_dates(
    const DateIndexedSeries& a, const DateIndexedSeries& b);

/// Mean of the observed values inside `p`; nullopt when none are observed.
[[nodiscard]] std::optional<double> period_mean(const DateIndexedSeries& s, const AnalysisPeriod& p);

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1)
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

[[nodiscard]] SummaryStats describe(std::span<const double> values);

// Serialization: CSV `date,value` and JSON {label, unit, start_date, values}.
void write_series_csv(std::ostream& out, const DateIndexedSeries& s);
[[nodiscard]] DateIndexedSeries read_series_csv(std::istream& in, std::string label,
                                                std::string unit = {});
[[nodiscard]] nlohmann::json series_to_json(const DateIndexedSeries& s);
[[nodiscard]] DateIndexedSeries series_from_json(const nlohmann::json& j);

}  // namespace demand_pulse
