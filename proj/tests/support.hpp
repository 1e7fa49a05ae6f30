#pragma once

#include <gtest/gtest.h>

#include <vector>

#include "demand_pulse/error.hpp"
#include "demand_pulse/series.hpp"
#include "oracles.hpp"

#define EXPECT_KIND(stmt, expected_kind)                                                                \
    do {                                                                                                \
        try {                                                                                           \
            (void)(stmt);                                                                               \
            ADD_FAILURE() << "expected " << ::demand_pulse::to_string(expected_kind) << " from " #stmt; \
        } catch (const ::demand_pulse::Error& e__) {                                                    \
            EXPECT_EQ(e__.kind(), expected_kind) << e__.what();                                         \
        }                                                                                               \
    } while (0)

namespace testutil {

inline demand_pulse::Date d(int y, unsigned m, unsigned day) { return demand_pulse::make_date(y, m, day); }

inline demand_pulse::DateIndexedSeries daily(std::vector<double> values, demand_pulse::Date start = d(2021, 1, 1),
                                             std::string label = "s") {
    return demand_pulse::DateIndexedSeries::contiguous(std::move(label), start, std::move(values));
}

inline std::vector<double> to_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace testutil
