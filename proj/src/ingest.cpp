#include "demand_pulse/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "demand_pulse/error.hpp"

namespace demand_pulse {

// ---------------------------------------------------------------------------
// Trip parsing

TripRowDecoder::TripRowDecoder(const CsvHeader& header, const TripSchema& schema, std::string_view source)
    : start_(header.require(schema.start, source)),
      end_(header.require(schema.end, source)),
      seconds_(header.require(schema.seconds, source)),
      miles_(header.require(schema.miles, source)),
      pickup_(header.require(schema.pickup, source)),
      dropoff_(header.require(schema.dropoff, source)),
      fare_(header.find(schema.fare)) {}

ParsedTrip TripRowDecoder::decode(const std::vector<std::string>& fields, std::size_t line) const {
    RawTrip raw;
    std::optional<RowError> error;
    auto fail = [&](const char* field, std::string message) {
        if (!error) error = RowError{line, field, std::move(message), {}};
    };
    auto cell = [&](std::size_t idx) -> std::string_view {
        return idx < fields.size() ? trim_view(fields[idx]) : std::string_view{};
    };

    auto read_timestamp = [&](std::size_t idx, const char* name) -> std::optional<Timestamp> {
        auto text = cell(idx);
        if (text.empty()) {
            fail(name, "missing timestamp");
            return std::nullopt;
        }
        auto ts = parse_timestamp(text);
        if (!ts) fail(name, "malformed timestamp '" + std::string(text) + "'");
        return ts;
    };
    auto read_real = [&](std::size_t idx, const char* name) -> std::optional<double> {
        auto text = cell(idx);
        if (text.empty()) return std::nullopt;
        auto v = parse_real(text);
        if (!v) fail(name, "malformed number '" + std::string(text) + "'");
        return v;
    };
    auto read_zone = [&](std::size_t idx, const char* name) -> std::optional<long long> {
        auto text = cell(idx);
        if (text.empty()) return std::nullopt;
        auto v = parse_integer(text);
        if (!v) fail(name, "malformed zone id '" + std::string(text) + "'");
        return v;
    };

    raw.start = read_timestamp(start_, "start");
    raw.end = read_timestamp(end_, "end");
    raw.duration_seconds = read_real(seconds_, "seconds");
    raw.distance_miles = read_real(miles_, "miles");
    raw.pickup_zone = read_zone(pickup_, "pickup");
    raw.dropoff_zone = read_zone(dropoff_, "dropoff");
    if (fare_) raw.fare = read_real(*fare_, "fare");

    if (error) {
        error->partial = raw;
        return *std::move(error);
    }
    return raw;
}

TripParser::TripParser(std::istream& in, const TripSchema& schema, std::string source) : reader_(in) {
    if (!reader_.next(fields_)) throw Error(ErrorKind::SchemaError, source + ": missing header row");
    decoder_.emplace(CsvHeader(fields_), schema, source);
}

std::optional<ParsedTrip> TripParser::next() {
    while (reader_.next(fields_)) {
        if (fields_.size() == 1 && fields_[0].empty()) continue;
        return decoder_->decode(fields_, reader_.line());
    }
    return std::nullopt;
}

std::vector<ParsedTrip> parse_trips(std::istream& in, const TripSchema& schema) {
    TripParser parser(in, schema);
    std::vector<ParsedTrip> out;
    while (auto row = parser.next()) out.push_back(*std::move(row));
    return out;
}

// ---------------------------------------------------------------------------
// Cleaning

std::string_view rule_id(CleaningRule rule) noexcept {
    switch (rule) {
        case CleaningRule::TimestampsPresent: return "1_timestamps_present";
        case CleaningRule::YearInRange: return "2_year_in_range";
        case CleaningRule::StartBeforeEnd: return "3_start_before_end";
        case CleaningRule::MinimumDuration: return "4_duration_over_60s";
        case CleaningRule::MinimumDistance: return "5_distance_over_half_mile";
        case CleaningRule::ZonesPresent: return "6_zones_present";
    }
    return "unknown";
}

namespace {

double effective_duration(const RawTrip& row) noexcept {
    if (row.duration_seconds) return *row.duration_seconds;
    return static_cast<double>((*row.end - *row.start).count());
}

bool valid_zone(const std::optional<long long>& z) noexcept {
    return z && *z >= kMinZoneId && *z <= kMaxZoneId;
}

}  // namespace

std::optional<CleaningRule> first_violation(const RawTrip& row) noexcept {
    if (!row.start || !row.end) return CleaningRule::TimestampsPresent;
    const int ys = year_of(*row.start), ye = year_of(*row.end);
    if (ys < kFirstValidYear || ys > kLastValidYear || ye < kFirstValidYear || ye > kLastValidYear) {
        return CleaningRule::YearInRange;
    }
    if (!(*row.start < *row.end)) return CleaningRule::StartBeforeEnd;
    if (!(effective_duration(row) > kMinTripSeconds)) return CleaningRule::MinimumDuration;
    if (!row.distance_miles || !(*row.distance_miles > kMinTripMiles)) return CleaningRule::MinimumDistance;
    if (!valid_zone(row.pickup_zone) || !valid_zone(row.dropoff_zone)) return CleaningRule::ZonesPresent;
    return std::nullopt;
}

std::size_t CleaningReport::total_rejected() const noexcept {
    std::size_t total = 0;
    for (auto n : rejected) total += n;
    return total;
}

void CleaningReport::merge(const CleaningReport& other) noexcept {
    rows_in += other.rows_in;
    rows_out += other.rows_out;
    row_errors += other.row_errors;
    for (std::size_t i = 0; i < kRuleCount; ++i) rejected[i] += other.rejected[i];
}

nlohmann::json to_json(const CleaningReport& report) {
    nlohmann::json per_rule = nlohmann::json::object();
    for (std::size_t i = 0; i < kRuleCount; ++i) {
        per_rule[std::string(rule_id(static_cast<CleaningRule>(i + 1)))] = report.rejected[i];
    }
    return {{"rows_in", report.rows_in},
            {"rows_out", report.rows_out},
            {"rejected_per_rule", per_rule},
            {"rows_with_parse_errors", report.row_errors}};
}

std::optional<TripRecord> TripCleaner::consume(const ParsedTrip& row) {
    ++report_.rows_in;
    const RawTrip* raw = std::get_if<RawTrip>(&row);
    if (!raw) {
        ++report_.row_errors;
        raw = &std::get<RowError>(row).partial;
    }
    if (auto rule = first_violation(*raw)) {
        ++report_.rejected[static_cast<std::size_t>(*rule) - 1];
        return std::nullopt;
    }
    ++report_.rows_out;
    return TripRecord{*raw->start,
                      *raw->end,
                      effective_duration(*raw),
                      *raw->distance_miles,
                      static_cast<int>(*raw->pickup_zone),
                      static_cast<int>(*raw->dropoff_zone),
                      raw->fare};
}

CleanedTrips clean_trips(std::span<const ParsedTrip> rows) {
    TripCleaner cleaner;
    CleanedTrips out;
    for (const auto& row : rows) {
        if (auto trip = cleaner.consume(row)) out.trips.push_back(*trip);
    }
    out.report = cleaner.report();
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation

std::string SeriesKey::to_string() const {
    if (pickup == 0) return "city";
    if (dropoff == 0) return std::to_string(pickup);
    return std::to_string(pickup) + "-" + std::to_string(dropoff);
}

namespace {

std::string series_label(const SeriesKey& key, std::string_view prefix) {
    if (key.pickup == 0) return std::string(prefix) + "city";
    if (key.dropoff == 0) return std::string(prefix) + "zone_" + std::to_string(key.pickup);
    return std::string(prefix) + "od_" + std::to_string(key.pickup) + "_" + std::to_string(key.dropoff);
}

SeriesKey project(AggregationKey key, int pickup, int dropoff) noexcept {
    switch (key) {
        case AggregationKey::City: return kCityKey;
        case AggregationKey::PickupZone: return {pickup, 0};
        case AggregationKey::OdPair: return {pickup, dropoff};
    }
    return kCityKey;
}

std::optional<SeriesKey> parse_series_key(std::string_view text) {
    if (text == "city") return kCityKey;
    auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        auto z = parse_integer(text);
        if (!z || *z < kMinZoneId || *z > kMaxZoneId) return std::nullopt;
        return SeriesKey{static_cast<int>(*z), 0};
    }
    auto p = parse_integer(text.substr(0, dash));
    auto d = parse_integer(text.substr(dash + 1));
    if (!p || !d) return std::nullopt;
    return SeriesKey{static_cast<int>(*p), static_cast<int>(*d)};
}

}  // namespace

void DailyAggregator::add(const TripRecord& trip) {
    auto& cell = days_[day_of(trip.start)][cell_key(trip.pickup_zone, trip.dropoff_zone)];
    ++cell.trips;
    cell.miles += trip.distance_miles;
    ++trips_;
}

void DailyAggregator::merge(const DailyAggregator& other) {
    for (const auto& [day, cells] : other.days_) {
        auto& mine = days_[day];
        for (const auto& [key, cell] : cells) {
            auto& m = mine[key];
            m.trips += cell.trips;
            m.miles += cell.miles;
        }
    }
    trips_ += other.trips_;
}

SeriesMap DailyAggregator::counts(AggregationKey key) const {
    SeriesMap out;
    if (days_.empty()) return out;
    const Date first = days_.begin()->first;
    const auto span = static_cast<std::size_t>((days_.rbegin()->first - first).count()) + 1;
    std::map<SeriesKey, std::vector<double>> values;
    for (const auto& [day, cells] : days_) {
        const auto idx = static_cast<std::size_t>((day - first).count());
        for (const auto& [ck, cell] : cells) {
            auto& v = values[project(key, ck / 100, ck % 100)];
            if (v.empty()) v.assign(span, 0.0);
            v[idx] += static_cast<double>(cell.trips);
        }
    }
    for (auto& [k, v] : values) {
        out.emplace(k, DateIndexedSeries::contiguous(series_label(k, "trips_"), first, std::move(v), "trips"));
    }
    return out;
}

SeriesMap DailyAggregator::mean_distance(AggregationKey key) const {
    struct Acc {
        std::vector<Date> dates;
        std::vector<double> values;
    };
    std::map<SeriesKey, Acc> acc;
    for (const auto& [day, cells] : days_) {
        std::map<SeriesKey, Cell> totals;
        for (const auto& [ck, cell] : cells) {
            auto& t = totals[project(key, ck / 100, ck % 100)];
            t.trips += cell.trips;
            t.miles += cell.miles;
        }
        for (const auto& [k, t] : totals) {
            if (t.trips == 0) continue;
            auto& a = acc[k];
            a.dates.push_back(day);
            a.values.push_back(t.miles / static_cast<double>(t.trips));
        }
    }
    SeriesMap out;
    for (auto& [k, a] : acc) {
        out.emplace(k, DateIndexedSeries(series_label(k, "mean_miles_"), std::move(a.dates), std::move(a.values),
                                         "miles"));
    }
    return out;
}

SeriesMap aggregate_daily(std::span<const TripRecord> trips, AggregationKey key) {
    DailyAggregator agg;
    for (const auto& t : trips) agg.add(t);
    return agg.counts(key);
}

SeriesMap daily_mean_distance(std::span<const TripRecord> trips, AggregationKey key) {
    DailyAggregator agg;
    for (const auto& t : trips) agg.add(t);
    return agg.mean_distance(key);
}

TripIngestResult ingest_trips(std::istream& in, const TripSchema& schema, unsigned threads, std::string source,
                              std::size_t chunk_rows) {
    threads = std::max(1u, threads);
    chunk_rows = std::max<std::size_t>(1, chunk_rows);
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw Error(ErrorKind::SchemaError, source + ": missing header row");
    const TripRowDecoder decoder(CsvHeader(fields), schema, source);

    struct Chunk {
        std::vector<std::vector<std::string>> records;
        std::vector<std::size_t> lines;
    };
    struct Shard {
        TripCleaner cleaner;
        DailyAggregator aggregate;
    };
    auto process = [&decoder](const Chunk& chunk, Shard& shard) {
        for (std::size_t i = 0; i < chunk.records.size(); ++i) {
            if (auto trip = shard.cleaner.consume(decoder.decode(chunk.records[i], chunk.lines[i]))) {
                shard.aggregate.add(*trip);
            }
        }
    };

    TripIngestResult result;
    std::vector<Chunk> batch(threads);
    bool more = true;
    while (more) {
        std::size_t filled = 0;
        for (auto& chunk : batch) {
            chunk.records.clear();
            chunk.lines.clear();
            while (chunk.records.size() < chunk_rows) {
                if (!reader.next(fields)) {
                    more = false;
                    break;
                }
                if (fields.size() == 1 && fields[0].empty()) continue;
                chunk.records.push_back(fields);
                chunk.lines.push_back(reader.line());
            }
            if (!chunk.records.empty()) ++filled;
            if (!more) break;
        }
        std::vector<Shard> shards(filled);
        if (filled == 1) {
            process(batch[0], shards[0]);
        } else if (filled > 1) {
            std::vector<std::jthread> workers;
            workers.reserve(filled);
            for (std::size_t i = 0; i < filled; ++i) {
                workers.emplace_back([&, i] { process(batch[i], shards[i]); });
            }
        }
        for (auto& shard : shards) {
            result.report.merge(shard.cleaner.report());
            result.aggregate.merge(shard.aggregate);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Count tables

CountTableSchema default_epidemic_schema() {
    return {"date",
            {"new_cases", "new_hospitalizations", "new_deaths"},
            {"cum_cases", "cum_hospitalizations", "cum_deaths"}};
}

CountTableSchema default_vaccination_schema() {
    return {"date", {"new_first", "new_second", "new_total"}, {"cum_first", "cum_second", "cum_total"}};
}

namespace {

struct CountRow {
    Date date;
    std::array<long long, 6> counts{};  // daily[0..2], cumulative[0..2]
};

std::vector<CountRow> parse_count_table(std::istream& in, const CountTableSchema& schema, std::string_view source) {
    const std::string src(source);
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw Error(ErrorKind::SchemaError, src + ": missing header row");
    const CsvHeader header(fields);
    const auto date_col = header.require(schema.date, source);
    std::array<std::optional<std::size_t>, 3> daily_col, cum_col;
    for (std::size_t k = 0; k < 3; ++k) {
        daily_col[k] = header.find(schema.daily[k]);
        cum_col[k] = header.find(schema.cumulative[k]);
        if (!daily_col[k] && !cum_col[k]) {
            throw Error(ErrorKind::SchemaError, src + ": neither '" + schema.daily[k] + "' nor '" +
                                                    schema.cumulative[k] + "' column present");
        }
    }

    std::vector<CountRow> rows;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        const std::string where = src + " line " + std::to_string(reader.line());
        auto cell = [&](std::size_t idx) -> std::string_view {
            return idx < fields.size() ? std::string_view(fields[idx]) : std::string_view{};
        };
        auto read_count = [&](std::size_t idx, const std::string& name) {
            auto v = parse_integer(cell(idx));
            if (!v) throw Error(ErrorKind::ParseError, where + ": bad count in '" + name + "'");
            if (*v < 0) throw Error(ErrorKind::ParseError, where + ": negative count in '" + name + "'");
            return *v;
        };
        CountRow row;
        auto d = parse_date(cell(date_col));
        if (!d) throw Error(ErrorKind::ParseError, where + ": bad date '" + std::string(cell(date_col)) + "'");
        row.date = *d;
        for (std::size_t k = 0; k < 3; ++k) {
            if (daily_col[k]) row.counts[k] = read_count(*daily_col[k], schema.daily[k]);
            if (cum_col[k]) row.counts[3 + k] = read_count(*cum_col[k], schema.cumulative[k]);
        }
        rows.push_back(row);
    }

    std::stable_sort(rows.begin(), rows.end(), [](const CountRow& a, const CountRow& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw Error(ErrorKind::DuplicateDate, src + ": date " + format_date(rows[i].date) + " appears twice");
        }
        if (rows[i].date - rows[i - 1].date != std::chrono::days{1}) {
            throw Error(ErrorKind::MissingDate, src + ": no row for " +
                                                    format_date(rows[i - 1].date + std::chrono::days{1}));
        }
    }

    for (std::size_t k = 0; k < 3; ++k) {
        long long running = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto& c = rows[i].counts;
            if (!cum_col[k]) {
                running += c[k];
                c[3 + k] = running;
            } else if (i > 0 && c[3 + k] < rows[i - 1].counts[3 + k]) {
                throw Error(ErrorKind::NonMonotoneCumulative,
                            src + ": '" + schema.cumulative[k] + "' decreases on " + format_date(rows[i].date));
            }
            if (!daily_col[k]) c[k] = i == 0 ? c[3 + k] : c[3 + k] - rows[i - 1].counts[3 + k];
        }
    }
    return rows;
}

}  // namespace

std::vector<EpidemicDaily> parse_epidemic(std::istream& in, const CountTableSchema& schema, std::string_view source) {
    std::vector<EpidemicDaily> out;
    for (const auto& r : parse_count_table(in, schema, source)) {
        const auto& c = r.counts;
        out.push_back({r.date, c[0], c[1], c[2], c[3], c[4], c[5]});
    }
    return out;
}

std::vector<VaccinationDaily> parse_vaccination(std::istream& in, const CountTableSchema& schema,
                                                std::string_view source) {
    std::vector<VaccinationDaily> out;
    for (const auto& r : parse_count_table(in, schema, source)) {
        const auto& c = r.counts;
        out.push_back({r.date, c[0], c[1], c[2], c[3], c[4], c[5]});
    }
    return out;
}

std::vector<ZoneInfo> parse_zones(std::istream& in, const ZoneSchema& schema, std::string_view source) {
    const std::string src(source);
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw Error(ErrorKind::SchemaError, src + ": missing header row");
    const CsvHeader header(fields);
    const auto id_col = header.require(schema.id, source);
    const auto name_col = header.require(schema.name, source);
    const auto pop_col = header.require(schema.population, source);
    const auto area_col = header.require(schema.area, source);
    const auto density_col = header.find(schema.density);

    std::vector<ZoneInfo> zones;
    std::set<int> seen;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        const std::string where = src + " line " + std::to_string(reader.line());
        auto cell = [&](std::size_t idx) -> std::string_view {
            return idx < fields.size() ? std::string_view(fields[idx]) : std::string_view{};
        };
        auto id = parse_integer(cell(id_col));
        if (!id || *id < kMinZoneId || *id > kMaxZoneId) {
            throw Error(ErrorKind::ParseError, where + ": zone id must be in 1..77");
        }
        if (!seen.insert(static_cast<int>(*id)).second) {
            throw Error(ErrorKind::ParseError, where + ": duplicate zone id " + std::to_string(*id));
        }
        ZoneInfo z;
        z.id = static_cast<int>(*id);
        z.name = std::string(trim_view(cell(name_col)));
        auto pop = parse_real(cell(pop_col));
        auto area = parse_real(cell(area_col));
        if (!pop || *pop < 0.0) throw Error(ErrorKind::ParseError, where + ": bad population");
        if (!area || *area < 0.0) throw Error(ErrorKind::ParseError, where + ": bad area");
        z.population = *pop;
        z.area_sq_miles = *area;
        std::optional<double> density;
        if (density_col && !trim_view(cell(*density_col)).empty()) {
            density = parse_real(cell(*density_col));
            if (!density) throw Error(ErrorKind::ParseError, where + ": bad density");
        }
        z.density = density ? *density : (z.area_sq_miles > 0.0 ? z.population / z.area_sq_miles : 0.0);
        zones.push_back(std::move(z));
    }
    std::sort(zones.begin(), zones.end(), [](const ZoneInfo& a, const ZoneInfo& b) { return a.id < b.id; });
    return zones;
}

bool covers_all_zones(std::span<const ZoneInfo> zones) noexcept {
    if (zones.size() != static_cast<std::size_t>(kMaxZoneId)) return false;
    std::array<bool, kMaxZoneId + 1> seen{};
    for (const auto& z : zones) {
        if (z.id < kMinZoneId || z.id > kMaxZoneId || seen[static_cast<std::size_t>(z.id)]) return false;
        seen[static_cast<std::size_t>(z.id)] = true;
    }
    return true;
}

void require_known_zone(std::span<const ZoneInfo> zones, int zone) {
    for (const auto& z : zones) {
        if (z.id == zone) return;
    }
    throw Error(ErrorKind::ForeignZone, "zone " + std::to_string(zone) + " has trips but no zone record");
}

namespace {

template <typename Row, typename Field>
DateIndexedSeries column_series(std::span<const Row> rows, std::string label, Field field) {
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(rows.size());
    values.reserve(rows.size());
    for (const auto& r : rows) {
        dates.push_back(r.date);
        values.push_back(static_cast<double>(r.*field));
    }
    return DateIndexedSeries(std::move(label), std::move(dates), std::move(values), "people");
}

}  // namespace

std::vector<DateIndexedSeries> epidemic_series(std::span<const EpidemicDaily> rows) {
    return {column_series(rows, "new_cases", &EpidemicDaily::new_cases),
            column_series(rows, "new_hospitalizations", &EpidemicDaily::new_hospitalizations),
            column_series(rows, "new_deaths", &EpidemicDaily::new_deaths),
            column_series(rows, "cum_cases", &EpidemicDaily::cum_cases),
            column_series(rows, "cum_hospitalizations", &EpidemicDaily::cum_hospitalizations),
            column_series(rows, "cum_deaths", &EpidemicDaily::cum_deaths)};
}

std::vector<DateIndexedSeries> vaccination_series(std::span<const VaccinationDaily> rows) {
    return {column_series(rows, "new_first_dose", &VaccinationDaily::new_first),
            column_series(rows, "new_second_dose", &VaccinationDaily::new_second),
            column_series(rows, "new_total_dose", &VaccinationDaily::new_total),
            column_series(rows, "cum_first_dose", &VaccinationDaily::cum_first),
            column_series(rows, "cum_second_dose", &VaccinationDaily::cum_second),
            column_series(rows, "cum_total_dose", &VaccinationDaily::cum_total)};
}

void write_keyed_csv(std::ostream& out, const SeriesMap& series, bool skip_zeros) {
    out << "date,key,value\n";
    for (const auto& [key, s] : series) {
        const std::string k = key.to_string();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (skip_zeros && s.value_at(i) == 0.0) continue;
            out << format_date(s.date_at(i)) << ',' << k << ',' << format_real(s.value_at(i)) << '\n';
        }
    }
}

SeriesMap read_keyed_csv(std::istream& in, std::string_view source) {
    const std::string src(source);
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw Error(ErrorKind::SchemaError, src + ": missing header row");
    const CsvHeader header(fields);
    const auto date_col = header.require("date", source);
    const auto key_col = header.require("key", source);
    const auto value_col = header.require("value", source);
    std::map<SeriesKey, std::vector<std::pair<Date, double>>> rows;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        const std::string where = src + " line " + std::to_string(reader.line());
        if (fields.size() <= std::max({date_col, key_col, value_col})) {
            throw Error(ErrorKind::ParseError, where + ": short row");
        }
        auto d = parse_date(fields[date_col]);
        auto k = parse_series_key(fields[key_col]);
        auto v = parse_real(fields[value_col]);
        if (!d || !k || !v) throw Error(ErrorKind::ParseError, where + ": bad date, key, or value");
        rows[*k].emplace_back(*d, *v);
    }
    SeriesMap out;
    for (auto& [k, pts] : rows) {
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Date> dates;
        std::vector<double> values;
        for (auto& [d, v] : pts) {
            dates.push_back(d);
            values.push_back(v);
        }
        out.emplace(k, DateIndexedSeries(k.to_string(), std::move(dates), std::move(values)));
    }
    return out;
}

}  // namespace demand_pulse
