#include <sstream>

#include "demand_pulse/config.hpp"
#include "support.hpp"

using namespace demand_pulse;
using testutil::d;

namespace {

PipelineConfig parse(const std::string& text, const std::filesystem::path& base = "/base") {
    std::istringstream in(text);
    return parse_config(in, base);
}

}  // namespace

TEST(Config, DefaultsAndParsing) {
    const auto def = parse("");
    EXPECT_EQ(def.before.start, d(2020, 3, 9));
    EXPECT_EQ(def.after.end, d(2021, 5, 31));
    EXPECT_EQ(def.tlcc_max_offset, 30);
    EXPECT_EQ(def.distance_threshold, 2.0);
    EXPECT_TRUE(def.smoothing);
    EXPECT_EQ(def.dtw_normalization, NormalizationMode::ZScore);

    const auto c = parse(
        "# comment\n"
        "trips = data/trips.csv   # trailing comment\n"
        "zones = /abs/zones.csv\n"
        "before.start = 2021-01-01\n"
        "before.end = 2021-01-10\n"
        "tlcc.max_offset = 5\n"
        "spatial.distance_threshold = 1.5\n"
        "spatial.fit_mode = origin\n"
        "dtw.normalization = minmax\n"
        "dtw.point_cost = squared\n"
        "smoothing = off\n"
        "threads = 4\n"
        "trips.column.miles = Miles\n");
    EXPECT_EQ(c.trips, std::filesystem::path("/base/data/trips.csv"));
    EXPECT_EQ(c.zones, std::filesystem::path("/abs/zones.csv"));
    EXPECT_EQ(c.before.end, d(2021, 1, 10));
    EXPECT_EQ(c.tlcc_max_offset, 5);
    EXPECT_EQ(c.distance_threshold, 1.5);
    EXPECT_EQ(c.fit_mode, FitMode::ThroughOrigin);
    EXPECT_EQ(c.dtw_normalization, NormalizationMode::MinMax);
    EXPECT_EQ(c.dtw_point_cost, PointCost::Squared);
    EXPECT_FALSE(c.smoothing);
    EXPECT_EQ(c.threads, 4u);
    EXPECT_EQ(c.trip_columns.miles, "Miles");
}

TEST(Config, RejectsInvalidInput) {
    EXPECT_KIND(parse("bogus = 1\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("no equals sign\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("tlcc.max_offset = 0\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("tlcc.max_offset = -3\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("tlcc.max_offset = many\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("spatial.distance_threshold = 0\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("spatial.distance_threshold = -1\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("before.start = 2021-13-01\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("after.start = 2021-06-01\n"), ErrorKind::ConfigError);  // after default end
    EXPECT_KIND(parse("smoothing = maybe\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("dtw.normalization = l2\n"), ErrorKind::ConfigError);
    EXPECT_KIND(parse("threads = 0\n"), ErrorKind::ConfigError);
    EXPECT_KIND(load_config("/nonexistent/config.conf"), ErrorKind::ConfigError);
}

TEST(Config, CanonicalFormExcludesPathsAndThreads) {
    const auto a = parse("trips = a.csv\nthreads = 1\n", "/x");
    const auto b = parse("trips = b.csv\nthreads = 8\noutput_dir = elsewhere\n", "/y");
    EXPECT_EQ(a.canonical(), b.canonical());
    EXPECT_EQ(sha256_hex(a.canonical()), sha256_hex(b.canonical()));
    const auto c = parse("tlcc.max_offset = 29\n");
    EXPECT_NE(a.canonical(), c.canonical());
    EXPECT_NE(a.canonical().find("tlcc.max_offset = 30\n"), std::string::npos);
}

TEST(Config, Sha256KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_file(testutil::fixture_dir() / "fixture.conf"),
              sha256_hex(testutil::slurp(testutil::fixture_dir() / "fixture.conf")));
}

TEST(Config, FixtureLoads) {
    const auto c = load_config(testutil::fixture_dir() / "fixture.conf");
    EXPECT_EQ(c.trips, testutil::fixture_dir() / "trips.csv");
    EXPECT_EQ(c.tlcc_max_offset, 5);
    EXPECT_EQ(c.after.start, d(2021, 1, 11));
}
