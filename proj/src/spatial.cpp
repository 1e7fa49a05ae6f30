#include "demand_pulse/spatial.hpp"

#include <algorithm>
#include <ostream>

#include <nlohmann/json.hpp>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"

namespace demand_pulse {

std::string_view to_string(PeriodName p) noexcept { return p == PeriodName::Before ? "before" : "after"; }

ZoneMetricsResult zone_period_metrics(const SeriesMap& zone_counts, const SeriesMap& zone_mean_distance,
                                      std::span<const ZoneInfo> zones, const AnalysisPeriod& period,
                                      PeriodName name) {
    for (const auto& [key, series] : zone_counts) {
        if (key == kCityKey) continue;
        bool any = false;
        for (double v : series.values()) any = any || v != 0.0;
        if (any) require_known_zone(zones, key.pickup);
    }

    ZoneMetricsResult out;
    for (const auto& zone : zones) {
        if (!(zone.population > 0.0)) {
            out.zero_population.push_back(zone.id);
            continue;
        }
        ZonePeriodMetrics m;
        m.zone_id = zone.id;
        m.period = name;
        const auto counts = zone_counts.find(SeriesKey{zone.id, 0});
        const auto miles = zone_mean_distance.find(SeriesKey{zone.id, 0});
        double weighted_miles = 0.0;
        long long weighted_trips = 0;
        if (counts != zone_counts.end()) {
            const auto& s = counts->second;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const Date d = s.date_at(i);
                if (!period.contains(d)) continue;
                const auto trips = static_cast<long long>(s.value_at(i));
                if (trips <= 0) continue;
                m.total_trips += trips;
                ++m.active_days;
                if (miles != zone_mean_distance.end()) {
                    if (auto day_mean = miles->second.find(d)) {
                        weighted_miles += *day_mean * static_cast<double>(trips);
                        weighted_trips += trips;
                    }
                }
            }
        }
        m.trips_per_1000 = 1000.0 * static_cast<double>(m.total_trips) / zone.population;
        if (weighted_trips > 0) m.mean_distance = weighted_miles / static_cast<double>(weighted_trips);
        out.metrics.push_back(m);
    }
    return out;
}

std::string_view to_string(FitMode mode) noexcept {
    return mode == FitMode::WithIntercept ? "intercept" : "origin";
}

std::optional<FitMode> parse_fit_mode(std::string_view text) noexcept {
    if (text == "intercept") return FitMode::WithIntercept;
    if (text == "origin") return FitMode::ThroughOrigin;
    return std::nullopt;
}

LinearFit ols_fit(std::span<const std::pair<double, double>> points, FitMode mode) {
    const std::size_t n = points.size();
    if (n < 2) throw Error(ErrorKind::TooShort, "linear fit needs at least 2 points");
    LinearFit fit;
    fit.n_points = n;
    fit.mode = mode;

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    const bool all_x_equal = std::all_of(points.begin(), points.end(),
                                         [&](const auto& p) { return p.first == points.front().first; });
    if (all_x_equal) throw Error(ErrorKind::DegenerateX, "every x value is equal");

    double ss_res = 0.0, ss_tot = 0.0;
    if (mode == FitMode::WithIntercept) {
        double sxy = 0.0, sxx = 0.0;
        for (const auto& [x, y] : points) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        fit.slope = sxy / sxx;
        fit.intercept = my - fit.slope * mx;
        for (const auto& [x, y] : points) {
            const double e = y - (fit.intercept + fit.slope * x);
            ss_res += e * e;
            ss_tot += (y - my) * (y - my);
        }
    } else {
        double sxy = 0.0, sxx = 0.0;
        for (const auto& [x, y] : points) {
            sxy += x * y;
            sxx += x * x;
        }
        fit.slope = sxy / sxx;
        fit.intercept = 0.0;
        for (const auto& [x, y] : points) {
            const double e = y - fit.slope * x;
            ss_res += e * e;
            ss_tot += y * y;
        }
    }
    if (ss_tot > 0.0) fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    return fit;
}

std::string_view to_string(DistanceClass c) noexcept {
    switch (c) {
        case DistanceClass::Increased: return "increased";
        case DistanceClass::Decreased: return "decreased";
        case DistanceClass::NotSignificant: return "not_significant";
        case DistanceClass::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

DistanceChange classify_distance_change(std::optional<double> before, std::optional<double> after, double threshold,
                                        int zone_id) {
    if (!(threshold > 0.0)) throw Error(ErrorKind::ConfigError, "distance threshold must be positive");
    DistanceChange c{zone_id, before, after, DistanceClass::Indeterminate, threshold};
    if (!before || !after) return c;
    if (*after - *before > threshold) {
        c.change = DistanceClass::Increased;
    } else if (*before - *after > threshold) {
        c.change = DistanceClass::Decreased;
    } else {
        c.change = DistanceClass::NotSignificant;
    }
    return c;
}

void write_zone_metrics_csv(std::ostream& out, std::span<const ZonePeriodMetrics> metrics) {
    out << "zone_id,period,total_trips,trips_per_1000,mean_distance,active_days\n";
    for (const auto& m : metrics) {
        out << m.zone_id << ',' << to_string(m.period) << ',' << m.total_trips << ',' << format_real(m.trips_per_1000)
            << ',';
        if (m.mean_distance) out << format_real(*m.mean_distance);
        out << ',' << m.active_days << '\n';
    }
}

void write_distance_change_csv(std::ostream& out, std::span<const DistanceChange> changes) {
    out << "zone_id,before_mean,after_mean,class,threshold\n";
    for (const auto& c : changes) {
        out << c.zone_id << ',';
        if (c.before_mean) out << format_real(*c.before_mean);
        out << ',';
        if (c.after_mean) out << format_real(*c.after_mean);
        out << ',' << to_string(c.change) << ',' << format_real(c.threshold) << '\n';
    }
}

nlohmann::json to_json(const LinearFit& fit) {
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared ? nlohmann::json(*fit.r_squared) : nlohmann::json(nullptr)},
            {"n_points", fit.n_points},
            {"mode", std::string(to_string(fit.mode))}};
}

}  // namespace demand_pulse
