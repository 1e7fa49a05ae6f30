#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "demand_pulse/ingest.hpp"
#include "support.hpp"

using namespace demand_pulse;
using testutil::d;

namespace {

const std::string kHeader =
    "Trip Start Timestamp,Trip End Timestamp,Trip Seconds,Trip Miles,Pickup Community Area,Dropoff Community Area\n";

std::vector<ParsedTrip> parse(const std::string& body, const TripSchema& schema = {}) {
    std::istringstream in(kHeader + body);
    return parse_trips(in, schema);
}

Timestamp at(Date day, int hour, int minute = 0, int second = 0) {
    using namespace std::chrono;
    return sys_days{day} + hours{hour} + minutes{minute} + seconds{second};
}

RawTrip valid_raw() {
    RawTrip r;
    r.start = at(d(2021, 1, 5), 10);
    r.end = at(d(2021, 1, 5), 10, 20);
    r.duration_seconds = 1200;
    r.distance_miles = 3.0;
    r.pickup_zone = 8;
    r.dropoff_zone = 32;
    return r;
}

TripRecord trip(Date day, int pickup, int dropoff, double miles, int hour = 10) {
    return TripRecord{at(day, hour), at(day, hour, 15), 900, miles, pickup, dropoff, std::nullopt};
}

std::vector<double> values_of(const DateIndexedSeries& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(ParseTrips, HeaderAndOneValidRow) {
    const auto rows = parse("01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,1200,3.0,8,32\n");
    ASSERT_EQ(rows.size(), 1u);
    const auto* raw = std::get_if<RawTrip>(&rows[0]);
    ASSERT_NE(raw, nullptr);
    EXPECT_EQ(raw->start, at(d(2021, 1, 5), 10));
    EXPECT_EQ(raw->pickup_zone, 8);
    EXPECT_EQ(raw->distance_miles, 3.0);
    EXPECT_FALSE(raw->fare);
}

TEST(ParseTrips, EmptyEndTimestampIsRowError) {
    const auto rows = parse("01/05/2021 10:00:00 AM,,1200,3.0,8,32\n");
    ASSERT_EQ(rows.size(), 1u);
    const auto* err = std::get_if<RowError>(&rows[0]);
    ASSERT_NE(err, nullptr);
    EXPECT_EQ(err->field, "end");
    EXPECT_EQ(err->line, 2u);
    EXPECT_EQ(err->partial.start, at(d(2021, 1, 5), 10));
    EXPECT_FALSE(err->partial.end);
}

TEST(ParseTrips, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse("").empty()); }

TEST(ParseTrips, MissingMappedColumnIsSchemaError) {
    std::istringstream in("Trip Start Timestamp,Trip End Timestamp\n");
    EXPECT_KIND(parse_trips(in), ErrorKind::SchemaError);
}

TEST(ParseTrips, MalformedNumberIsRowErrorNotFatal) {
    const auto rows = parse(
        "01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,1200,three,8,32\n"
        "01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,1200,3.0,8,32\n");
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_TRUE(std::holds_alternative<RowError>(rows[0]));
    EXPECT_EQ(std::get<RowError>(rows[0]).field, "miles");
    EXPECT_TRUE(std::holds_alternative<RawTrip>(rows[1]));
}

TEST(ParseTrips, EmptyNumericCellsAreAbsent) {
    const auto rows = parse("01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,,3.0,,32\n");
    const auto& raw = std::get<RawTrip>(rows.at(0));
    EXPECT_FALSE(raw.duration_seconds);
    EXPECT_FALSE(raw.pickup_zone);
}

TEST(ParseTrips, CustomSchemaQuotedFieldsAndBom) {
    TripSchema schema;
    schema.start = "begin";
    schema.end = "finish";
    schema.seconds = "secs";
    schema.miles = "dist";
    schema.pickup = "from";
    schema.dropoff = "to";
    schema.fare = "cost";
    std::istringstream in(
        "\xEF\xBB\xBF"
        "to,from,dist,secs,finish,begin,cost\n"
        "32,8,\"1,234.5\",600,2021-01-05T10:10:00,2021-01-05T10:00:00,\"12.50\"\n");
    const auto rows = parse_trips(in, schema);
    const auto& raw = std::get<RawTrip>(rows.at(0));
    EXPECT_EQ(raw.distance_miles, 1234.5);
    EXPECT_EQ(raw.dropoff_zone, 32);
    EXPECT_EQ(raw.fare, 12.5);
}

TEST(ParseTrips, StreamingParserMatchesBatch) {
    const std::string body =
        "01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,1200,3.0,8,32\n"
        "bad,01/05/2021 10:20:00 AM,1200,3.0,8,32\n";
    std::istringstream in(kHeader + body);
    TripParser parser(in, TripSchema{});
    std::size_t n = 0;
    while (auto row = parser.next()) ++n;
    EXPECT_EQ(n, parse(body).size());
}

TEST(Cleaning, SpecExamples) {
    auto r = valid_raw();
    r.duration_seconds = 45;
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDuration);

    r = valid_raw();
    r.distance_miles = 0.3;
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDistance);

    r = valid_raw();
    r.start = at(d(2020, 5, 1), 10);
    r.end = at(d(2020, 5, 1), 9);
    EXPECT_EQ(first_violation(r), CleaningRule::StartBeforeEnd);

    EXPECT_FALSE(first_violation(valid_raw()));
    const std::vector<ParsedTrip> rows{valid_raw()};
    const auto cleaned = clean_trips(rows);
    EXPECT_EQ(cleaned.report.rows_out, 1u);
    ASSERT_EQ(cleaned.trips.size(), 1u);
    EXPECT_EQ(cleaned.trips[0].pickup_zone, 8);
}

TEST(Cleaning, EachRuleAndBoundaries) {
    auto r = valid_raw();
    r.start.reset();
    EXPECT_EQ(first_violation(r), CleaningRule::TimestampsPresent);

    r = valid_raw();
    r.end = at(d(2022, 1, 1), 0, 5);
    EXPECT_EQ(first_violation(r), CleaningRule::YearInRange);
    r.start = at(d(2017, 12, 31), 23, 55);
    r.end = at(d(2018, 1, 1), 0, 5);
    EXPECT_EQ(first_violation(r), CleaningRule::YearInRange);

    r = valid_raw();
    r.end = r.start;
    EXPECT_EQ(first_violation(r), CleaningRule::StartBeforeEnd);

    r = valid_raw();
    r.duration_seconds = 60;
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDuration);
    r.duration_seconds = 61;
    EXPECT_FALSE(first_violation(r));

    // Without a recorded duration the timestamps decide.
    r = valid_raw();
    r.duration_seconds.reset();
    r.end = at(d(2021, 1, 5), 10, 1);
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDuration);
    r.end = at(d(2021, 1, 5), 10, 1, 1);
    EXPECT_FALSE(first_violation(r));

    r = valid_raw();
    r.distance_miles = 0.5;
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDistance);
    r.distance_miles.reset();
    EXPECT_EQ(first_violation(r), CleaningRule::MinimumDistance);

    for (std::optional<long long> zone : {std::optional<long long>{}, std::optional<long long>{0},
                                          std::optional<long long>{78}}) {
        r = valid_raw();
        r.dropoff_zone = zone;
        EXPECT_EQ(first_violation(r), CleaningRule::ZonesPresent);
        r = valid_raw();
        r.pickup_zone = zone;
        EXPECT_EQ(first_violation(r), CleaningRule::ZonesPresent);
    }
    r = valid_raw();
    r.pickup_zone = 1;
    r.dropoff_zone = 77;
    EXPECT_FALSE(first_violation(r));
}

TEST(Cleaning, MultipleViolationsChargedToFirst) {
    auto r = valid_raw();
    r.start = at(d(2022, 1, 1), 10);
    r.end = at(d(2022, 1, 1), 9);
    r.duration_seconds = 10;
    r.distance_miles = 0.1;
    r.pickup_zone.reset();
    EXPECT_EQ(first_violation(r), CleaningRule::YearInRange);
    const std::vector<ParsedTrip> rows{r};
    const auto report = clean_trips(rows).report;
    EXPECT_EQ(report.rejected_by(CleaningRule::YearInRange), 1u);
    EXPECT_EQ(report.total_rejected(), 1u);
}

TEST(Cleaning, RowErrorIsChargedThroughItsPartialRow) {
    const auto rows = parse(
        "01/05/2021 10:00:00 AM,not a time,1200,3.0,8,32\n"
        "01/05/2021 10:00:00 AM,01/05/2021 10:20:00 AM,1200,3.0,eight,32\n");
    const auto report = clean_trips(rows).report;
    EXPECT_EQ(report.rows_in, 2u);
    EXPECT_EQ(report.row_errors, 2u);
    EXPECT_EQ(report.rejected_by(CleaningRule::TimestampsPresent), 1u);
    EXPECT_EQ(report.rejected_by(CleaningRule::ZonesPresent), 1u);
}

TEST(Cleaning, AdversarialFixtureCounts) {
    std::ifstream in(testutil::data_dir() / "adversarial_trips.csv");
    const auto rows = parse_trips(in);
    const auto cleaned = clean_trips(rows);
    const auto& rep = cleaned.report;
    EXPECT_EQ(rep.rows_in, 10u);
    EXPECT_EQ(rep.rows_out, 4u);
    for (std::size_t rule = 1; rule <= kRuleCount; ++rule) {
        EXPECT_EQ(rep.rejected_by(static_cast<CleaningRule>(rule)), 1u) << "rule " << rule;
    }
    EXPECT_EQ(rep.rows_in, rep.rows_out + rep.total_rejected());
    const auto j = to_json(rep);
    EXPECT_EQ(j.at("rejected_per_rule").at("4_duration_over_60s"), 1);
    EXPECT_EQ(j.at("rows_out"), 4);
}

namespace {

RawTrip random_raw(std::mt19937_64& rng) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    RawTrip r;
    const Date day = d(2016 + pick(8), 1 + static_cast<unsigned>(pick(12)), 1 + static_cast<unsigned>(pick(28)));
    if (pick(10)) r.start = at(day, pick(24), pick(60));
    if (pick(10) && r.start) r.end = *r.start + std::chrono::seconds(pick(400) - 50);
    if (pick(3)) r.duration_seconds = pick(300);
    if (pick(8)) r.distance_miles = pick(40) / 10.0;
    if (pick(8)) r.pickup_zone = pick(80);
    if (pick(8)) r.dropoff_zone = pick(80);
    return r;
}

}  // namespace

TEST(Cleaning, AccountingIdentityAndPermutationInvariance) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ParsedTrip> rows;
        for (int i = 0; i < 500; ++i) {
            if (rng() % 20 == 0) {
                rows.emplace_back(RowError{static_cast<std::size_t>(i), "miles", "bad", random_raw(rng)});
            } else {
                rows.emplace_back(random_raw(rng));
            }
        }
        const auto a = clean_trips(rows);
        EXPECT_EQ(a.report.rows_in, 500u);
        EXPECT_EQ(a.report.rows_in, a.report.rows_out + a.report.total_rejected());
        for (const auto& t : a.trips) {
            EXPECT_LT(t.start, t.end);
            EXPECT_GT(t.duration_seconds, 60.0);
            EXPECT_GT(t.distance_miles, 0.5);
            EXPECT_GE(t.pickup_zone, 1);
            EXPECT_LE(t.dropoff_zone, 77);
        }
        std::shuffle(rows.begin(), rows.end(), rng);
        EXPECT_EQ(clean_trips(rows).report, a.report);
    }
}

TEST(Aggregate, ThreeTripsSameDaySameZone) {
    const std::vector<TripRecord> trips{trip(d(2021, 1, 5), 8, 1, 2), trip(d(2021, 1, 5), 8, 2, 2),
                                        trip(d(2021, 1, 5), 8, 3, 2)};
    const auto m = aggregate_daily(trips, AggregationKey::PickupZone);
    EXPECT_EQ(m.at(SeriesKey{8, 0}).find(d(2021, 1, 5)), 3.0);
}

TEST(Aggregate, EmptyInputIsEmptyMap) {
    EXPECT_TRUE(aggregate_daily({}, AggregationKey::City).empty());
    EXPECT_TRUE(daily_mean_distance({}, AggregationKey::City).empty());
}

TEST(Aggregate, CityZeroFill) {
    const std::vector<TripRecord> trips{trip(d(2021, 1, 1), 8, 8, 1), trip(d(2021, 1, 1), 9, 8, 1),
                                        trip(d(2021, 1, 3), 8, 8, 1)};
    const auto m = aggregate_daily(trips, AggregationKey::City);
    const auto& s = m.at(kCityKey);
    EXPECT_EQ(values_of(s), (std::vector<double>{2, 0, 1}));
    EXPECT_EQ(s.first_date(), d(2021, 1, 1));
    // Per-zone series are zero-filled over the same global range.
    const auto z = aggregate_daily(trips, AggregationKey::PickupZone);
    EXPECT_EQ(values_of(z.at(SeriesKey{9, 0})), (std::vector<double>{1, 0, 0}));
}

TEST(Aggregate, OdPairsAndKeys) {
    const std::vector<TripRecord> trips{trip(d(2021, 1, 1), 8, 32, 1), trip(d(2021, 1, 1), 8, 32, 1),
                                        trip(d(2021, 1, 1), 32, 8, 1)};
    const auto m = aggregate_daily(trips, AggregationKey::OdPair);
    EXPECT_EQ(m.at(SeriesKey{8, 32}).value_at(0), 2.0);
    EXPECT_EQ(m.at(SeriesKey{32, 8}).value_at(0), 1.0);
    EXPECT_EQ((SeriesKey{8, 32}.to_string()), "8-32");
    EXPECT_EQ((SeriesKey{8, 0}.to_string()), "8");
    EXPECT_EQ(kCityKey.to_string(), "city");
}

TEST(Aggregate, TripDatedByStartDay) {
    using namespace std::chrono;
    TripRecord t = trip(d(2021, 1, 1), 8, 8, 2);
    t.start = at(d(2021, 1, 1), 23, 50);
    t.end = at(d(2021, 1, 2), 0, 20);
    const auto m = aggregate_daily(std::vector<TripRecord>{t}, AggregationKey::City);
    EXPECT_EQ(m.at(kCityKey).first_date(), d(2021, 1, 1));
    EXPECT_EQ(m.at(kCityKey).size(), 1u);
}

TEST(MeanDistance, MeanAndMissingDays) {
    const std::vector<TripRecord> trips{trip(d(2021, 1, 1), 8, 8, 2), trip(d(2021, 1, 1), 8, 8, 4),
                                        trip(d(2021, 1, 3), 8, 8, 5)};
    const auto m = daily_mean_distance(trips, AggregationKey::City);
    const auto& s = m.at(kCityKey);
    EXPECT_EQ(s.find(d(2021, 1, 1)), 3.0);
    EXPECT_FALSE(s.find(d(2021, 1, 2)));
    EXPECT_EQ(s.find(d(2021, 1, 3)), 5.0);
    // Period mean skips the missing day: (3 + 5) / 2.
    EXPECT_EQ(period_mean(s, AnalysisPeriod(d(2021, 1, 1), d(2021, 1, 3))), 4.0);
}

TEST(Aggregate, ConservationOnRandomTrips) {
    std::mt19937_64 rng(7);
    std::vector<TripRecord> trips;
    for (int i = 0; i < 3000; ++i) {
        trips.push_back(trip(d(2021, 1, 1) + std::chrono::days{static_cast<int>(rng() % 40)},
                             1 + static_cast<int>(rng() % 77), 1 + static_cast<int>(rng() % 77), 1.0));
    }
    const auto city = aggregate_daily(trips, AggregationKey::City).at(kCityKey);
    const auto zones = aggregate_daily(trips, AggregationKey::PickupZone);
    const auto od = aggregate_daily(trips, AggregationKey::OdPair);
    for (std::size_t i = 0; i < city.size(); ++i) {
        double zone_sum = 0, od_sum = 0;
        for (const auto& [k, s] : zones) zone_sum += s.value_at(i);
        for (const auto& [k, s] : od) od_sum += s.find(city.date_at(i)).value_or(0.0);
        EXPECT_EQ(zone_sum, city.value_at(i));
        EXPECT_EQ(od_sum, city.value_at(i));
    }
    for (const auto& [k, s] : zones) {
        for (double v : s.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_EQ(v, std::floor(v));
        }
    }
}

TEST(IngestTrips, ThreadCountDoesNotChangeResults) {
    std::ifstream f(testutil::fixture_dir() / "trips.csv");
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    auto run = [&](unsigned threads, std::size_t chunk) {
        std::istringstream in(text);
        return ingest_trips(in, TripSchema{}, threads, "trips", chunk);
    };
    const auto base = run(1, 257);
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto other = run(threads, 257);
        EXPECT_EQ(other.report, base.report);
        for (auto key : {AggregationKey::City, AggregationKey::PickupZone, AggregationKey::OdPair}) {
            EXPECT_EQ(other.aggregate.counts(key), base.aggregate.counts(key));
        }
        for (auto key : {AggregationKey::City, AggregationKey::PickupZone}) {
            EXPECT_EQ(other.aggregate.mean_distance(key), base.aggregate.mean_distance(key));
        }
    }
    // Counts and tallies do not depend on the chunk size either.
    const auto one_chunk = run(4, kDefaultChunkRows);
    EXPECT_EQ(one_chunk.report, base.report);
    EXPECT_EQ(one_chunk.aggregate.counts(AggregationKey::OdPair), base.aggregate.counts(AggregationKey::OdPair));
}

TEST(IngestTrips, MatchesFixtureOracle) {
    const auto expected = testutil::expected();
    std::ifstream in(testutil::fixture_dir() / "trips.csv");
    const auto result = ingest_trips(in, TripSchema{}, 2);
    EXPECT_EQ(result.report.rows_in, expected.at("rows_in").get<std::size_t>());
    EXPECT_EQ(result.report.rows_out, expected.at("rows_out").get<std::size_t>());
    for (std::size_t r = 0; r < kRuleCount; ++r) {
        EXPECT_EQ(result.report.rejected[r], expected.at("rejected_by_rule").at(r).get<std::size_t>());
    }
    const auto city = result.aggregate.counts(AggregationKey::City).at(kCityKey);
    for (const auto& [date, n] : expected.at("daily_city").items()) {
        EXPECT_EQ(city.find(*parse_date(date)), n.get<double>()) << date;
    }
    const auto zones = result.aggregate.counts(AggregationKey::PickupZone);
    for (const auto& [zone, days] : expected.at("daily_zone").items()) {
        const auto& s = zones.at(SeriesKey{std::stoi(zone), 0});
        for (const auto& [date, n] : days.items()) EXPECT_EQ(s.find(*parse_date(date)), n.get<double>());
    }
}

TEST(KeyedCsv, RoundTripAndSparseMode) {
    const std::vector<TripRecord> trips{trip(d(2021, 1, 1), 8, 32, 1.25), trip(d(2021, 1, 3), 32, 8, 1)};
    const auto od = aggregate_daily(trips, AggregationKey::OdPair);
    std::stringstream dense, sparse;
    write_keyed_csv(dense, od);
    write_keyed_csv(sparse, od, true);
    EXPECT_EQ(sparse.str(), "date,key,value\n2021-01-01,8-32,1\n2021-01-03,32-8,1\n");
    const auto back = read_keyed_csv(dense, "od");
    ASSERT_EQ(back.size(), od.size());
    for (const auto& [k, s] : od) EXPECT_EQ(values_of(back.at(k)), values_of(s));
}

TEST(Epidemic, ParsesAndValidates) {
    std::istringstream ok(
        "date,new_cases,new_hospitalizations,new_deaths,cum_cases,cum_hospitalizations,cum_deaths\n"
        "2021-01-02,5,1,0,15,3,1\n"
        "2021-01-01,10,2,1,10,2,1\n");
    const auto rows = parse_epidemic(ok);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].date, d(2021, 1, 1));
    EXPECT_EQ(rows[1].cum_cases, 15);

    std::istringstream dup("date,new_cases,new_hospitalizations,new_deaths\n2021-01-01,1,1,1\n2021-01-01,1,1,1\n");
    EXPECT_KIND(parse_epidemic(dup), ErrorKind::DuplicateDate);

    std::istringstream down("date,cum_cases,cum_hospitalizations,cum_deaths\n2021-01-01,100,1,1\n2021-01-02,90,1,1\n");
    EXPECT_KIND(parse_epidemic(down), ErrorKind::NonMonotoneCumulative);

    std::istringstream gap("date,new_cases,new_hospitalizations,new_deaths\n2021-01-01,1,1,1\n2021-01-03,1,1,1\n");
    EXPECT_KIND(parse_epidemic(gap), ErrorKind::MissingDate);

    std::istringstream neg("date,new_cases,new_hospitalizations,new_deaths\n2021-01-01,-1,1,1\n");
    EXPECT_KIND(parse_epidemic(neg), ErrorKind::ParseError);

    std::istringstream missing("date,new_cases\n2021-01-01,1\n");
    EXPECT_KIND(parse_epidemic(missing), ErrorKind::SchemaError);
}

TEST(Epidemic, DerivesMissingHalfOfEachPair) {
    std::istringstream daily_only("date,new_cases,new_hospitalizations,new_deaths\n"
                                  "2021-01-01,1,0,0\n2021-01-02,2,1,0\n2021-01-03,3,0,1\n");
    const auto a = parse_epidemic(daily_only);
    EXPECT_EQ(a[2].cum_cases, 6);
    EXPECT_EQ(a[2].cum_deaths, 1);

    std::istringstream cum_only("date,cum_cases,cum_hospitalizations,cum_deaths\n"
                                "2021-01-01,1,0,0\n2021-01-02,3,1,0\n2021-01-03,6,1,1\n");
    const auto b = parse_epidemic(cum_only);
    EXPECT_EQ(b[1].new_cases, 2);
    EXPECT_EQ(b[2].new_hospitalizations, 0);

    const auto series = epidemic_series(b);
    ASSERT_EQ(series.size(), 6u);
    EXPECT_EQ(series[0].label(), "new_cases");
    EXPECT_EQ(series[3].label(), "cum_cases");
    EXPECT_EQ(values_of(series[3]), (std::vector<double>{1, 3, 6}));
}

TEST(Vaccination, LabelsAndCustomColumns) {
    CountTableSchema schema{"Date", {"First", "Second", "Total"}, {"CumFirst", "CumSecond", "CumTotal"}};
    std::istringstream in("Date,First,Second,Total\n12/15/2020,5,0,5\n12/16/2020,7,1,8\n");
    const auto rows = parse_vaccination(in, schema);
    EXPECT_EQ(rows[1].cum_total, 13);
    const auto series = vaccination_series(rows);
    std::vector<std::string> labels;
    for (const auto& s : series) labels.push_back(s.label());
    EXPECT_EQ(labels, (std::vector<std::string>{"new_first_dose", "new_second_dose", "new_total_dose",
                                                "cum_first_dose", "cum_second_dose", "cum_total_dose"}));
}

TEST(Zones, FullCityFile) {
    std::ifstream in(testutil::data_dir() / "community_areas.csv");
    const auto zones = parse_zones(in);
    ASSERT_EQ(zones.size(), 77u);
    for (int i = 0; i < 77; ++i) EXPECT_EQ(zones[static_cast<std::size_t>(i)].id, i + 1);
    EXPECT_TRUE(covers_all_zones(zones));
    EXPECT_EQ(zones[75].name, "O'Hare");
    EXPECT_DOUBLE_EQ(zones[0].density, zones[0].population / zones[0].area_sq_miles);
}

TEST(Zones, Errors) {
    std::istringstream dup("id,name,population,area\n1,A,10,1\n1,B,10,1\n");
    EXPECT_KIND(parse_zones(dup), ErrorKind::ParseError);
    std::istringstream out_of_range("id,name,population,area\n78,A,10,1\n");
    EXPECT_KIND(parse_zones(out_of_range), ErrorKind::ParseError);
    std::istringstream partial("id,name,population,area\n1,A,10,1\n");
    const auto zones = parse_zones(partial);
    EXPECT_FALSE(covers_all_zones(zones));
    EXPECT_KIND(require_known_zone(zones, 5), ErrorKind::ForeignZone);
    EXPECT_NO_THROW(require_known_zone(zones, 1));
}
