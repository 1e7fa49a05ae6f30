#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/date.hpp"
#include "demand_pulse/series.hpp"

namespace demand_pulse {

inline constexpr int kMinZoneId = 1;
inline constexpr int kMaxZoneId = 77;
inline constexpr int kFirstValidYear = 2018;
inline constexpr int kLastValidYear = 2021;
inline constexpr double kMinTripSeconds = 60.0;
inline constexpr double kMinTripMiles = 0.5;

// ---------------------------------------------------------------------------
// Trips

/// Column names of the trip export. Defaults match the city data portal.
struct TripSchema {
    std::string start = "Trip Start Timestamp";
    std::string end = "Trip End Timestamp";
    std::string seconds = "Trip Seconds";
    std::string miles = "Trip Miles";
    std::string pickup = "Pickup Community Area";
    std::string dropoff = "Dropoff Community Area";
    std::string fare = "Fare";  // optional; absent column is not an error
};

/// One trip row as read, before any cleaning rule is applied. A field that is
/// empty in the file is nullopt.
struct RawTrip {
    std::optional<Timestamp> start;
    std::optional<Timestamp> end;
    std::optional<double> duration_seconds;
    std::optional<double> distance_miles;
    std::optional<long long> pickup_zone;
    std::optional<long long> dropoff_zone;
    std::optional<double> fare;
};

/// A row that could not be read cleanly. `partial` holds every field that did
/// parse, with the offending field left empty, so cleaning can still charge
/// the row to the right rule.
struct RowError {
    std::size_t line = 0;
    std::string field;
    std::string message;
    RawTrip partial;
};

using ParsedTrip = std::variant<RawTrip, RowError>;

/// Resolves schema columns against a header and turns records into trips.
class TripRowDecoder {
public:
    TripRowDecoder(const CsvHeader& header, const TripSchema& schema, std::string_view source);
    [[nodiscard]] ParsedTrip decode(const std::vector<std::string>& fields, std::size_t line) const;

private:
    std::size_t start_, end_, seconds_, miles_, pickup_, dropoff_;
    std::optional<std::size_t> fare_;
};

/// Pull-based trip reader; memory use does not grow with file size.
class TripParser {
public:
    TripParser(std::istream& in, const TripSchema& schema, std::string source = "trips");

    /// nullopt at end of input.
    [[nodiscard]] std::optional<ParsedTrip> next();

private:
    CsvReader reader_;
    std::vector<std::string> fields_;
    std::optional<TripRowDecoder> decoder_;
};

[[nodiscard]] std::vector<ParsedTrip> parse_trips(std::istream& in, const TripSchema& schema = {});

struct TripRecord {
    Timestamp start;
    Timestamp end;
    double duration_seconds = 0.0;
    double distance_miles = 0.0;
    int pickup_zone = 0;
    int dropoff_zone = 0;
    std::optional<double> fare;
};

enum class CleaningRule {
    TimestampsPresent = 1,
    YearInRange = 2,
    StartBeforeEnd = 3,
    MinimumDuration = 4,
    MinimumDistance = 5,
    ZonesPresent = 6,
};

inline constexpr std::size_t kRuleCount = 6;

[[nodiscard]] std::string_view rule_id(CleaningRule rule) noexcept;

/// First rule (in rule order) the row breaks, or nullopt if it survives.
[[nodiscard]] std::optional<CleaningRule> first_violation(const RawTrip& row) noexcept;

struct CleaningReport {
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    std::array<std::size_t, kRuleCount> rejected{};
    std::size_t row_errors = 0;  // informational; those rows are also charged to a rule

    [[nodiscard]] std::size_t rejected_by(CleaningRule rule) const noexcept {
        return rejected[static_cast<std::size_t>(rule) - 1];
    }
    [[nodiscard]] std::size_t total_rejected() const noexcept;
    void merge(const CleaningReport& other) noexcept;
    friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

[[nodiscard]] nlohmann::json to_json(const CleaningReport& report);

class TripCleaner {
public:
    [[nodiscard]] std::optional<TripRecord> consume(const ParsedTrip& row);
    [[nodiscard]] const CleaningReport& report() const noexcept { return report_; }

private:
    CleaningReport report_;
};

struct CleanedTrips {
    std::vector<TripRecord> trips;
    CleaningReport report;
};

[[nodiscard]] CleanedTrips clean_trips(std::span<const ParsedTrip> rows);

// ---------------------------------------------------------------------------
// Daily aggregation

enum class AggregationKey { City, PickupZone, OdPair };

/// Aggregate identity: city = {0,0}, zone z = {z,0}, OD pair = {p,d}.
struct SeriesKey {
    int pickup = 0;
    int dropoff = 0;

    [[nodiscard]] std::string to_string() const;
    friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

inline constexpr SeriesKey kCityKey{};

using SeriesMap = std::map<SeriesKey, DateIndexedSeries>;

/// Per-day, per-OD trip counts and summed miles. Shard-local instances are
/// merged by summation; merging in a fixed shard order gives identical sums.
class DailyAggregator {
public:
    void add(const TripRecord& trip);
    void merge(const DailyAggregator& other);

    [[nodiscard]] bool empty() const noexcept { return days_.empty(); }
    [[nodiscard]] std::size_t trip_count() const noexcept { return trips_; }

    /// Trip counts, zero-filled over the global observed date range.
    [[nodiscard]] SeriesMap counts(AggregationKey key) const;
    /// Mean trip miles. Days without trips are absent from the series.
    [[nodiscard]] SeriesMap mean_distance(AggregationKey key) const;

private:
    struct Cell {
        long long trips = 0;
        double miles = 0.0;
    };
    static int cell_key(int pickup, int dropoff) noexcept { return pickup * 100 + dropoff; }

    std::map<Date, std::map<int, Cell>> days_;
    std::size_t trips_ = 0;
};

[[nodiscard]] SeriesMap aggregate_daily(std::span<const TripRecord> trips, AggregationKey key);
[[nodiscard]] SeriesMap daily_mean_distance(std::span<const TripRecord> trips, AggregationKey key);

struct TripIngestResult {
    DailyAggregator aggregate;
    CleaningReport report;
};

inline constexpr std::size_t kDefaultChunkRows = 1 << 16;

/// Streams, cleans, and aggregates a trip file. Records are cut into fixed
/// chunks processed by up to `threads` workers and merged in chunk order, so
/// results do not depend on the thread count.
[[nodiscard]] TripIngestResult ingest_trips(std::istream& in, const TripSchema& schema, unsigned threads,
                                            std::string source = "trips",
                                            std::size_t chunk_rows = kDefaultChunkRows);

// ---------------------------------------------------------------------------
// Epidemic, vaccination, zones

struct EpidemicDaily {
    Date date;
    long long new_cases = 0;
    long long new_hospitalizations = 0;
    long long new_deaths = 0;
    long long cum_cases = 0;
    long long cum_hospitalizations = 0;
    long long cum_deaths = 0;
};

struct VaccinationDaily {
    Date date;
    long long new_first = 0;
    long long new_second = 0;
    long long new_total = 0;
    long long cum_first = 0;
    long long cum_second = 0;
    long long cum_total = 0;
};

/// Daily count table columns. When only the daily or only the cumulative
/// column of a measure is present, the other is derived from it.
struct CountTableSchema {
    std::string date = "date";
    std::array<std::string, 3> daily;
    std::array<std::string, 3> cumulative;
};

[[nodiscard]] CountTableSchema default_epidemic_schema();
[[nodiscard]] CountTableSchema default_vaccination_schema();

[[nodiscard]] std::vector<EpidemicDaily> parse_epidemic(std::istream& in,
                                                        const CountTableSchema& schema = default_epidemic_schema(),
                                                        std::string_view source = "epidemic");
[[nodiscard]] std::vector<VaccinationDaily> parse_vaccination(
    std::istream& in, const CountTableSchema& schema = default_vaccination_schema(),
    std::string_view source = "vaccination");

struct ZoneInfo {
    int id = 0;
    std::string name;
    double population = 0.0;
    double area_sq_miles = 0.0;
    double density = 0.0;  // persons per square mile
};

struct ZoneSchema {
    std::string id = "id";
    std::string name = "name";
    std::string population = "population";
    std::string area = "area";
    std::string density = "density";  // optional; derived when absent
};

[[nodiscard]] std::vector<ZoneInfo> parse_zones(std::istream& in, const ZoneSchema& schema = {},
                                                std::string_view source = "zones");

/// True when ids are exactly 1..77.
[[nodiscard]] bool covers_all_zones(std::span<const ZoneInfo> zones) noexcept;

/// Throws ForeignZone when `zone` is not in `zones`.
void require_known_zone(std::span<const ZoneInfo> zones, int zone);

// Labelled daily series of the epidemic and vaccination tables.
[[nodiscard]] std::vector<DateIndexedSeries> epidemic_series(std::span<const EpidemicDaily> rows);
[[nodiscard]] std::vector<DateIndexedSeries> vaccination_series(std::span<const VaccinationDaily> rows);

/// Writes `date,key,value` rows. Sparse maps (OD pairs) may skip zero rows.
void write_keyed_csv(std::ostream& out, const SeriesMap& series, bool skip_zeros = false);
[[nodiscard]] SeriesMap read_keyed_csv(std::istream& in, std::string_view source);

}  // namespace demand_pulse
