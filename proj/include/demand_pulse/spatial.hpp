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

#include "demand_pulse/ingest.hpp"
#include "demand_pulse/series.hpp"

namespace demand_pulse {

inline constexpr double kDefaultDistanceThreshold = 2.0;  // miles

enum class PeriodName { Before, After };

[[nodiscard]] std::string_view to_string(PeriodName p) noexcept;

struct ZonePeriodMetrics {
    int zone_id = 0;
    PeriodName period = PeriodName::Before;
    long long total_trips = 0;
    double trips_per_1000 = 0.0;          // period total per thousand residents
    std::optional<double> mean_distance;  // trip-weighted; nullopt without trips
    std::size_t active_days = 0;
};

struct ZoneMetricsResult {
    std::vector<ZonePeriodMetrics> metrics;  // ordered by zone id
    std::vector<int> zero_population;        // zones skipped for lack of residents
};

/// One record per zone in `zones`. Zones with trips but no zone record raise
/// ForeignZone. `zone_counts` and `zone_mean_distance` are keyed by pickup zone.
[[nodiscard]] ZoneMetricsResult zone_period_metrics(const SeriesMap& zone_counts,
                                                    const SeriesMap& zone_mean_distance,
                                                    std::span<const ZoneInfo> zones, const AnalysisPeriod& period,
                                                    PeriodName name);

enum class FitMode { WithIntercept, ThroughOrigin };

[[nodiscard]] std::string_view to_string(FitMode mode) noexcept;
[[nodiscard]] std::optional<FitMode> parse_fit_mode(std::string_view text) noexcept;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<double> r_squared;  // nullopt when every y is equal
    std::size_t n_points = 0;
    FitMode mode = FitMode::WithIntercept;
};

/// Least squares of y on x. With an intercept, r^2 = 1 - SSres/SStot about
/// the mean of y; through the origin SStot is the uncentred sum of y^2.
[[nodiscard]] LinearFit ols_fit(std::span<const std::pair<double, double>> points,
                                FitMode mode = FitMode::WithIntercept);

enum class DistanceClass { Increased, Decreased, NotSignificant, Indeterminate };

[[nodiscard]] std::string_view to_string(DistanceClass c) noexcept;

struct DistanceChange {
    int zone_id = 0;
    std::optional<double> before_mean;
    std::optional<double> after_mean;
    DistanceClass change = DistanceClass::Indeterminate;
    double threshold = kDefaultDistanceThreshold;
};

/// Strict comparison: a difference of exactly `threshold` is not significant.
[[nodiscard]] DistanceChange classify_distance_change(std::optional<double> before, std::optional<double> after,
                                                      double threshold = kDefaultDistanceThreshold,
                                                      int zone_id = 0);

void write_zone_metrics_csv(std::ostream& out, std::span<const ZonePeriodMetrics> metrics);
void write_distance_change_csv(std::ostream& out, std::span<const DistanceChange> changes);
[[nodiscard]] nlohmann::json to_json(const LinearFit& fit);

}  // namespace demand_pulse
