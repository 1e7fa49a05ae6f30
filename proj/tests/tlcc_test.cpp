#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "demand_pulse/correlation.hpp"
#include "demand_pulse/tlcc.hpp"
#include "support.hpp"

using namespace demand_pulse;
using testutil::d;
using testutil::daily;

namespace {

// x[t] = f(t), y[t] = f(t - shift) for a random base signal f.
std::pair<std::vector<double>, std::vector<double>> shifted_pair(std::mt19937_64& rng, std::size_t n, int shift) {
    const long pad = std::abs(shift);
    const auto base = testutil::uniform(rng, n + 2 * static_cast<std::size_t>(pad), -1, 1);
    std::vector<double> x(n), y(n);
    for (std::size_t t = 0; t < n; ++t) {
        const long i = static_cast<long>(t) + pad;
        x[t] = base[static_cast<std::size_t>(i)];
        y[t] = base[static_cast<std::size_t>(i - shift)];
    }
    return {x, y};
}

}  // namespace

TEST(Tlcc, IdenticalSeriesPeakAtZero) {
    std::mt19937_64 rng(1);
    const auto x = testutil::uniform(rng, 60, 0, 1);
    const auto p = tlcc_sweep(x, x, 10);
    EXPECT_EQ(p.best_offset, 0);
    EXPECT_NEAR(p.best_r, 1.0, 1e-15);
    EXPECT_EQ(p.offsets.size(), 21u);
    EXPECT_EQ(p.offsets.front(), -10);
    EXPECT_EQ(p.offsets.back(), 10);
    EXPECT_EQ(interpret(p, "a", "b"), "synchronous");
}

TEST(Tlcc, ShiftedSinusoidReachesUnitCorrelation) {
    std::vector<double> x, y;
    for (int t = 0; t < 120; ++t) {
        x.push_back(std::sin(0.05 * t) + 0.3 * std::sin(0.31 * t));
        y.push_back(std::sin(0.05 * (t - 3)) + 0.3 * std::sin(0.31 * (t - 3)));
    }
    EXPECT_NEAR(tlcc_at(x, y, 3), 1.0, 1e-12);
    const auto p = tlcc_sweep(x, y, 10);
    EXPECT_EQ(p.best_offset, 3);
}

TEST(Tlcc, ReversedRampIsPerfectlyNegative) {
    std::vector<double> x, y;
    for (int t = 0; t < 20; ++t) {
        x.push_back(t);
        y.push_back(19 - t);
    }
    EXPECT_DOUBLE_EQ(tlcc_at(x, y, 0), -1.0);
}

TEST(Tlcc, RecoversKnownShiftsBothDirections) {
    std::mt19937_64 rng(7);
    for (int shift : {3, -5, 1, -1, 10, -10, 0}) {
        const auto [x, y] = shifted_pair(rng, 100, shift);
        const auto p = tlcc_sweep(x, y, 10);
        EXPECT_EQ(p.best_offset, shift);
        EXPECT_NEAR(p.best_r, 1.0, 1e-12);
    }
}

TEST(Tlcc, OffsetZeroEqualsPearsonAndMatchesLaggedOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = testutil::uniform(rng, 80, -10, 10);
        const auto y = testutil::uniform(rng, 80, -10, 10);
        EXPECT_EQ(tlcc_at(x, y, 0), pearson(x, y));
        for (int k = -15; k <= 15; ++k) {
            const double r = tlcc_at(x, y, k);
            EXPECT_LT(std::abs(r - oracle::lagged_pearson(x, y, k)), 1e-12);
            EXPECT_NEAR(r, tlcc_at(y, x, -k), 1e-15);
        }
    }
}

TEST(Tlcc, PositiveOffsetMeansXLeads) {
    // y repeats x two days later: x leads y.
    const auto x = daily({0, 5, 1, 7, 2, 9, 3, 3, 8, 1, 4, 6}, d(2021, 1, 1), "x");
    std::vector<double> yv{0, 0};
    for (std::size_t t = 0; t + 2 < x.size(); ++t) yv.push_back(x.values()[t]);
    const auto y = daily(yv, d(2021, 1, 1), "y");
    const auto p = tlcc_sweep(x, y, 3);
    EXPECT_EQ(p.best_offset, 2);
    EXPECT_EQ(interpret(p, "x", "y"), "x leads y by 2 days");
}

TEST(Tlcc, TiesPreferSmallestMagnitudeThenNegative) {
    // Palindromic inputs give r(-1) == r(+1) exactly; both beat r(0).
    const std::vector<double> x{0, 0, 1, 3, 5, 3, 1, 0, 0}, y{0, 0, 1, 0, 0, 0, 1, 0, 0};
    const auto p = tlcc_sweep(x, y, 1);
    ASSERT_EQ(p.r_values[0], p.r_values[2]);
    ASSERT_GT(*p.r_values[0], *p.r_values[1]);
    EXPECT_EQ(p.best_offset, -1);

    // A linear ramp correlates perfectly at every offset: the smallest |offset| wins.
    std::vector<double> ramp;
    for (int t = 0; t < 30; ++t) ramp.push_back(t);
    const auto q = tlcc_sweep(ramp, ramp, 5);
    for (const auto& r : q.r_values) EXPECT_EQ(*r, 1.0);
    EXPECT_EQ(q.best_offset, 0);
}

TEST(Tlcc, DegenerateOffsetsAreMissing) {
    const std::vector<double> x{1, 2, 3, 7, 7, 7, 7, 7}, y{4, 1, 5, 9, 2, 6, 5, 3};
    const auto p = tlcc_sweep(x, y, 4);
    // Negative offsets pair y with the tail of x, which is constant from lag 3 on.
    EXPECT_FALSE(p.r_values[0]);  // -4
    EXPECT_FALSE(p.r_values[1]);  // -3
    EXPECT_TRUE(p.r_values[4]);   // 0
    std::ostringstream csv;
    write_profile_csv(csv, p);
    EXPECT_EQ(csv.str().substr(0, 20), "offset,r\n-4,\n-3,\n-2,");
}

TEST(Tlcc, LengthAndInputErrors) {
    std::mt19937_64 rng(5);
    const auto x13 = testutil::uniform(rng, 13, 0, 1), y13 = testutil::uniform(rng, 13, 0, 1);
    EXPECT_KIND(tlcc_sweep(x13, y13, 10), ErrorKind::TooShort);
    const auto x14 = testutil::uniform(rng, 14, 0, 1), y14 = testutil::uniform(rng, 14, 0, 1);
    EXPECT_NO_THROW((void)tlcc_sweep(x14, y14, 10));
    EXPECT_KIND(tlcc_sweep(x14, y13, 5), ErrorKind::NotAligned);
    EXPECT_KIND(tlcc_sweep(x14, y14, -1), ErrorKind::ConfigError);
    EXPECT_KIND(tlcc_at(x14, y14, 12), ErrorKind::TooShort);
    EXPECT_KIND(tlcc_sweep(daily({1, 2, 3, 4, 5, 6}), daily({1, 2, 3, 4, 5, 6}, d(2021, 2, 1)), 1),
                ErrorKind::NotAligned);
    const std::vector<double> flat(20, 1.0);
    EXPECT_KIND(tlcc_sweep(flat, flat, 3), ErrorKind::ZeroVariance);
}

TEST(Tlcc, ThreadCountDoesNotChangeProfile) {
    std::mt19937_64 rng(9);
    const auto x = testutil::uniform(rng, 200, 0, 1), y = testutil::uniform(rng, 200, 0, 1);
    const auto a = tlcc_sweep(x, y, 30, 1), b = tlcc_sweep(x, y, 30, 8);
    EXPECT_EQ(a.r_values, b.r_values);
    EXPECT_EQ(a.best_offset, b.best_offset);
}

TEST(Tlcc, Interpretation) {
    TlccProfile p;
    p.best_offset = 2;
    EXPECT_EQ(interpret(p, "cumulative first dose", "taxi volume"),
              "cumulative first dose leads taxi volume by 2 days");
    p.best_offset = -25;
    EXPECT_EQ(interpret(p, "cumulative second dose", "taxi volume"),
              "taxi volume leads cumulative second dose by 25 days");
    p.best_offset = 1;
    EXPECT_EQ(interpret(p, "a", "b"), "a leads b by 1 day");
    p.best_offset = -1;
    EXPECT_EQ(interpret(p, "a", "b"), "b leads a by 1 day");
}

TEST(Tlcc, SummaryJson) {
    std::mt19937_64 rng(3);
    const auto [x, y] = shifted_pair(rng, 50, -4);
    const auto p = tlcc_sweep(x, y, 6);
    const auto j = summary_json(p, "x", "y");
    EXPECT_EQ(j.at("best_offset"), -4);
    EXPECT_EQ(j.at("verdict"), "y leads x by 4 days");
    EXPECT_EQ(j.at("convention"), std::string(kLagConvention));
    EXPECT_EQ(j.at("x"), "x");
}
