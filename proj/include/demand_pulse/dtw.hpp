#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demand_pulse/series.hpp"

namespace demand_pulse {

/// Pointwise distance between samples: |q - c| (default) or (q - c)^2.
enum class PointCost { Absolute, Squared };

[[nodiscard]] std::string_view to_string(PointCost cost) noexcept;
[[nodiscard]] std::optional<PointCost> parse_point_cost(std::string_view text) noexcept;

/// n x m matrix of non-negative pointwise distances, row-major, 0-based access.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return cells_[i * cols_ + j]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

[[nodiscard]] CostMatrix pointwise_cost(std::span<const double> q, std::span<const double> c,
                                        PointCost cost = PointCost::Absolute);
[[nodiscard]] CostMatrix pointwise_cost(const DateIndexedSeries& q, const DateIndexedSeries& c,
                                        PointCost cost = PointCost::Absolute);

/// One alignment step, 1-based: (index into q, index into c).
struct PathStep {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const PathStep&, const PathStep&) = default;
};

using WarpingPath = std::vector<PathStep>;

/// Describes the first way `path` fails to be a warping path for an n x m
/// alignment (boundary, step continuity/monotonicity, length bounds), or
/// nullopt if it is valid.
[[nodiscard]] std::optional<std::string> path_violation(std::span<const PathStep> path, std::size_t n,
                                                        std::size_t m);

struct DtwResult {
    double distance = 0.0;
    WarpingPath path;
    NormalizationMode normalization = NormalizationMode::None;
};

/// Full dynamic program over the cost matrix with path recovery. Ties prefer
/// the diagonal predecessor, then (i-1, j), then (i, j-1).
[[nodiscard]] DtwResult dtw_distance(const CostMatrix& cost);

/// Same distance as dtw_distance with O(min(n, m)) memory and no path.
[[nodiscard]] double dtw_distance_only(std::span<const double> q, std::span<const double> c,
                                       PointCost cost = PointCost::Absolute);

/// Normalizes both series with `mode`, then aligns them.
[[nodiscard]] DtwResult dtw(const DateIndexedSeries& q, const DateIndexedSeries& c, NormalizationMode mode,
                            PointCost cost = PointCost::Absolute);

[[nodiscard]] nlohmann::json to_json(const DtwResult& result);

enum class SeriesGroup { DailyEpidemic, CumulativeEpidemic, DailyVaccination, CumulativeVaccination, Other };

[[nodiscard]] std::string_view to_string(SeriesGroup group) noexcept;
[[nodiscard]] std::optional<SeriesGroup> parse_series_group(std::string_view text) noexcept;

struct DtwCandidate {
    std::string label;
    DateIndexedSeries series;
    SeriesGroup group = SeriesGroup::Other;
};

struct DtwReportRow {
    std::string label;
    SeriesGroup group = SeriesGroup::Other;
    std::optional<DtwResult> result;  // nullopt when normalization failed
    std::string error;
};

struct DtwReport {
    NormalizationMode normalization = NormalizationMode::ZScore;
    PointCost cost = PointCost::Absolute;
    std::vector<DtwReportRow> rows;
    /// Mean distance per group over rows that produced one.
    std::map<SeriesGroup, double> group_means;
};

/// Aligns every candidate against `target`, both normalized the same way.
[[nodiscard]] DtwReport dtw_report(const DateIndexedSeries& target, std::span<const DtwCandidate> candidates,
                                   NormalizationMode mode, PointCost cost = PointCost::Absolute,
                                   unsigned threads = 1);

/// `label,distance,group`; a failed row has an empty distance.
void write_report_csv(std::ostream& out, const DtwReport& report);
[[nodiscard]] nlohmann::json to_json(const DtwReport& report);

}  // namespace demand_pulse
