#include "demand_pulse/series.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"

namespace demand_pulse {

AnalysisPeriod::AnalysisPeriod(Date s, Date e) : start(s), end(e) {
    if (e < s) {
        throw Error(ErrorKind::ConfigError,
                    "period start " + format_date(s) + " is after end " + format_date(e));
    }
}

DateIndexedSeries::DateIndexedSeries(std::string label, std::vector<Date> dates,
                                     std::vector<double> values, std::string unit)
    : label_(std::move(label)), unit_(std::move(unit)), dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw Error(ErrorKind::InvariantViolation, label_ + ": dates and values differ in length");
    }
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvariantViolation,
                        label_ + ": non-finite value on " + format_date(dates_[i]));
        }
        if (i > 0 && dates_[i] <= dates_[i - 1]) {
            throw Error(dates_[i] == dates_[i - 1] ? ErrorKind::DuplicateDate : ErrorKind::InvariantViolation,
                        label_ + ": dates not strictly increasing at " + format_date(dates_[i]));
        }
    }
}

DateIndexedSeries DateIndexedSeries::contiguous(std::string label, Date start, std::vector<double> values,
                                                std::string unit) {
    std::vector<Date> dates;
    dates.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dates.push_back(start + std::chrono::days{i});
    return DateIndexedSeries(std::move(label), std::move(dates), std::move(values), std::move(unit));
}

Date DateIndexedSeries::first_date() const {
    if (empty()) throw Error(ErrorKind::EmptyInput, label_ + ": series is empty");
    return dates_.front();
}

Date DateIndexedSeries::last_date() const {
    if (empty()) throw Error(ErrorKind::EmptyInput, label_ + ": series is empty");
    return dates_.back();
}

bool DateIndexedSeries::is_contiguous() const noexcept {
    if (dates_.empty()) return true;
    return (dates_.back() - dates_.front()).count() + 1 == static_cast<long>(dates_.size());
}

std::optional<double> DateIndexedSeries::find(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return values_[static_cast<std::size_t>(it - dates_.begin())];
}

DateIndexedSeries DateIndexedSeries::relabeled(std::string label) const {
    DateIndexedSeries out = *this;
    out.label_ = std::move(label);
    return out;
}

DateIndexedSeries DateIndexedSeries::with_values(std::vector<double> values) const {
    return DateIndexedSeries(label_, dates_, std::move(values), unit_);
}

std::string_view to_string(NormalizationMode mode) noexcept {
    switch (mode) {
        case NormalizationMode::ZScore: return "zscore";
        case NormalizationMode::MinMax: return "minmax";
        case NormalizationMode::None: return "none";
    }
    return "none";
}

std::optional<NormalizationMode> parse_normalization(std::string_view text) noexcept {
    if (text == "zscore") return NormalizationMode::ZScore;
    if (text == "minmax") return NormalizationMode::MinMax;
    if (text == "none") return NormalizationMode::None;
    return std::nullopt;
}

namespace {

void require_non_empty(const DateIndexedSeries& s) {
    if (s.empty()) throw Error(ErrorKind::EmptyInput, "series '" + s.label() + "' is empty");
}

void require_contiguous(const DateIndexedSeries& s) {
    if (!s.is_contiguous()) {
        throw Error(ErrorKind::MissingDate, "series '" + s.label() + "' has gaps; fill missing dates first");
    }
}

}  // namespace

DateIndexedSeries fill_missing_dates(const DateIndexedSeries& s, double fill) {
    require_non_empty(s);
    const auto span = static_cast<std::size_t>((s.last_date() - s.first_date()).count()) + 1;
    std::vector<double> values(span, fill);
    const Date start = s.first_date();
    for (std::size_t i = 0; i < s.size(); ++i) {
        values[static_cast<std::size_t>((s.date_at(i) - start).count())] = s.value_at(i);
    }
    return DateIndexedSeries::contiguous(s.label(), start, std::move(values), s.unit());
}

DateIndexedSeries rolling_mean_7(const DateIndexedSeries& s) {
    constexpr std::size_t window = 7;
    require_non_empty(s);
    require_contiguous(s);
    auto v = s.values();
    std::vector<double> out(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        const std::size_t lo = t + 1 >= window ? t + 1 - window : 0;
        // summed per window, not with a running total, so the result is
        // exactly linear in the input and exact on constants
        double sum = 0.0;
        for (std::size_t k = lo; k <= t; ++k) sum += v[k];
        out[t] = sum / static_cast<double>(t - lo + 1);
    }
    return DateIndexedSeries(s.label() + "_7d", std::vector<Date>(s.dates().begin(), s.dates().end()),
                             std::move(out), s.unit());
}

DateIndexedSeries restrict(const DateIndexedSeries& s, const AnalysisPeriod& p) {
    std::vector<Date> dates;
    std::vector<double> values;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (p.contains(s.date_at(i))) {
            dates.push_back(s.date_at(i));
            values.push_back(s.value_at(i));
        }
    }
    if (dates.empty()) {
        throw Error(ErrorKind::EmptyWindow, "series '" + s.label() + "' has no entries in " +
                                                format_date(p.start) + ".." + format_date(p.end));
    }
    return DateIndexedSeries(s.label(), std::move(dates), std::move(values), s.unit());
}

DateIndexedSeries zscore(const DateIndexedSeries& s) {
    if (s.size() < 2) throw Error(ErrorKind::TooShort, "zscore of '" + s.label() + "' needs >= 2 values");
    auto v = s.values();
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "series '" + s.label() + "' is constant");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
    return s.with_values(std::move(out));
}

DateIndexedSeries minmax(const DateIndexedSeries& s) {
    require_non_empty(s);
    auto [lo, hi] = std::minmax_element(s.values().begin(), s.values().end());
    const double min = *lo;
    const double range = *hi - *lo;
    if (!(range > 0.0)) throw Error(ErrorKind::ZeroRange, "series '" + s.label() + "' is constant");
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s.value_at(i) - min) / range;
    return s.with_values(std::move(out));
}

DateIndexedSeries normalize(const DateIndexedSeries& s, NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::ZScore: return zscore(s);
        case NormalizationMode::MinMax: return minmax(s);
        case NormalizationMode::None: return s;
    }
    return s;
}

DateIndexedSeries cumulative(const DateIndexedSeries& s) {
    require_non_empty(s);
    require_contiguous(s);
    std::vector<double> out(s.size());
    double running = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        running += s.value_at(i);
        out[i] = running;
    }
    return s.with_values(std::move(out));
}

DateIndexedSeries daily_from_cumulative(const DateIndexedSeries& s) {
    require_non_empty(s);
    require_contiguous(s);
    std::vector<double> out(s.size());
    out[0] = s.value_at(0);
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s.value_at(i) < s.value_at(i - 1)) {
            throw Error(ErrorKind::NonMonotoneCumulative,
                        "series '" + s.label() + "' decreases on " + format_date(s.date_at(i)));
        }
        out[i] = s.value_at(i) - s.value_at(i - 1);
    }
    return s.with_values(std::move(out));
}

std::pair<DateIndexedSeries, DateIndexedSeries> align_common_dates(const DateIndexedSeries& a,
                                                                   const DateIndexedSeries& b) {
    require_non_empty(a);
    require_non_empty(b);
    const Date lo = std::max(a.first_date(), b.first_date());
    const Date hi = std::min(a.last_date(), b.last_date());
    if (hi < lo) {
        throw Error(ErrorKind::EmptyWindow,
                    "series '" + a.label() + "' and '" + b.label() + "' do not overlap");
    }
    // Within the shared range keep only dates present in both, so the outputs
    // pair up index by index even when one input has gaps.
    std::vector<Date> da, db;
    std::vector<double> va, vb;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const Date x = a.date_at(i), y = b.date_at(j);
        if (x < y) {
            ++i;
        } else if (y < x) {
            ++j;
        } else {
            if (x >= lo && x <= hi) {
                da.push_back(x);
                va.push_back(a.value_at(i));
                db.push_back(y);
                vb.push_back(b.value_at(j));
            }
            ++i;
            ++j;
        }
    }
    if (da.empty()) {
        throw Error(ErrorKind::EmptyWindow,
                    "series '" + a.label() + "' and '" + b.label() + "' share no dates");
    }
    return {DateIndexedSeries(a.label(), std::move(da), std::move(va), a.unit()),
            DateIndexedSeries(b.label(), std::move(db), std::move(vb), b.unit())};
}

std::optional<double> period_mean(const DateIndexedSeries& s, const AnalysisPeriod& p) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (p.contains(s.date_at(i))) {
            sum += s.value_at(i);
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

SummaryStats describe(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "describe of empty sample");
    SummaryStats st;
    st.count = values.size();
    const double n = static_cast<double>(values.size());
    for (double v : values) st.mean += v;
    st.mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.std_dev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    st.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return st;
}

void write_series_csv(std::ostream& out, const DateIndexedSeries& s) {
    out << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_date(s.date_at(i)) << ',' << format_real(s.value_at(i)) << '\n';
    }
}

DateIndexedSeries read_series_csv(std::istream& in, std::string label, std::string unit) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw Error(ErrorKind::SchemaError, label + ": missing header");
    CsvHeader header(fields);
    const auto date_col = header.require("date", label);
    const auto value_col = header.require("value", label);
    std::vector<std::pair<Date, double>> rows;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() <= std::max(date_col, value_col)) {
            throw Error(ErrorKind::ParseError, label + " line " + std::to_string(reader.line()) + ": short row");
        }
        auto d = parse_date(fields[date_col]);
        auto v = parse_real(fields[value_col]);
        if (!d || !v) {
            throw Error(ErrorKind::ParseError, label + " line " + std::to_string(reader.line()) +
                                                   ": bad date or value");
        }
        rows.emplace_back(*d, *v);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Date> dates;
    std::vector<double> values;
    for (auto& [d, v] : rows) {
        dates.push_back(d);
        values.push_back(v);
    }
    return DateIndexedSeries(std::move(label), std::move(dates), std::move(values), std::move(unit));
}

nlohmann::json series_to_json(const DateIndexedSeries& s) {
    if (!s.is_contiguous()) {
        throw Error(ErrorKind::MissingDate, "JSON form needs a contiguous series: '" + s.label() + "'");
    }
    nlohmann::json j;
    j["label"] = s.label();
    j["unit"] = s.unit();
    j["start_date"] = s.empty() ? nlohmann::json(nullptr) : nlohmann::json(format_date(s.first_date()));
    j["values"] = std::vector<double>(s.values().begin(), s.values().end());
    return j;
}

DateIndexedSeries series_from_json(const nlohmann::json& j) {
    try {
        auto label = j.at("label").get<std::string>();
        auto unit = j.value("unit", std::string{});
        auto values = j.at("values").get<std::vector<double>>();
        if (values.empty()) return DateIndexedSeries(std::move(label), {}, {}, std::move(unit));
        auto start = parse_date(j.at("start_date").get<std::string>());
        if (!start) throw Error(ErrorKind::ParseError, label + ": bad start_date");
        return DateIndexedSeries::contiguous(std::move(label), *start, std::move(values), std::move(unit));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("series JSON: ") + e.what());
    }
}

}  // namespace demand_pulse
