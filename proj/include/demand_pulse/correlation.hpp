#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demand_pulse/series.hpp"

namespace demand_pulse {

/// Pearson's r over two equal-length samples, mean-centred in two passes.
/// Throws TooShort below 3 points and ZeroVariance for a constant sample.
[[nodiscard]] double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson's r of two series on identical dates (see align_common_dates).
/// Throws NotAligned when the date vectors differ.
[[nodiscard]] double pearson(const DateIndexedSeries& x, const DateIndexedSeries& y);

struct CorrelationMatrix {
    std::vector<std::string> labels;
    /// Row-major labels x labels; nullopt marks a cell whose pair could not be
    /// correlated (no overlap, too short, constant).
    std::vector<std::optional<double>> values;
    /// Common window used by each cell; nullopt when the pair does not overlap.
    std::vector<std::optional<AnalysisPeriod>> windows;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::optional<double> at(std::size_t i, std::size_t j) const {
        return values.at(i * labels.size() + j);
    }
};

/// Pairwise-complete matrix: each cell aligns its own pair of series. Cells are
/// computed on up to `threads` workers; the result does not depend on it.
[[nodiscard]] CorrelationMatrix correlation_matrix(std::span<const DateIndexedSeries> series,
                                                   unsigned threads = 1);

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& m);
[[nodiscard]] nlohmann::json to_json(const CorrelationMatrix& m);

}  // namespace demand_pulse
