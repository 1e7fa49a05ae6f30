#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demand_pulse/series.hpp"

namespace demand_pulse {

inline constexpr std::string_view kLagConvention = "positive offset => x leads y";
inline constexpr int kDefaultMaxOffset = 30;

/// Correlation of the pairs (x[t - offset], y[t]) over the overlap that
/// remains after shifting; nothing is padded or wrapped. Means and deviations
/// are taken over that overlap only.
[[nodiscard]] double tlcc_at(std::span<const double> x, std::span<const double> y, int offset);
[[nodiscard]] double tlcc_at(const DateIndexedSeries& x, const DateIndexedSeries& y, int offset);

struct TlccProfile {
    std::vector<int> offsets;                   // -L..+L
    std::vector<std::optional<double>> r_values;  // nullopt where the overlap degenerates
    int best_offset = 0;
    double best_r = 0.0;
    std::string convention{kLagConvention};
};

/// Sweeps every offset in [-max_offset, +max_offset]. The peak prefers the
/// smallest |offset| among equal r values, then the negative one.
[[nodiscard]] TlccProfile tlcc_sweep(std::span<const double> x, std::span<const double> y, int max_offset,
                                     unsigned threads = 1);
[[nodiscard]] TlccProfile tlcc_sweep(const DateIndexedSeries& x, const DateIndexedSeries& y, int max_offset,
                                     unsigned threads = 1);

/// Human-readable lead/lag statement, e.g. "cum_first_dose leads taxi_trips by 2 days".
[[nodiscard]] std::string interpret(const TlccProfile& profile, std::string_view x_label,
                                    std::string_view y_label);

void write_profile_csv(std::ostream& out, const TlccProfile& profile);
[[nodiscard]] nlohmann::json summary_json(const TlccProfile& profile, std::string_view x_label,
                                          std::string_view y_label);

}  // namespace demand_pulse
