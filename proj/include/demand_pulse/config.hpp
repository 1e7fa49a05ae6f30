#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "demand_pulse/dtw.hpp"
#include "demand_pulse/ingest.hpp"
#include "demand_pulse/series.hpp"
#include "demand_pulse/spatial.hpp"

namespace demand_pulse {

/// Everything a pipeline run depends on. Loaded from a `key = value` text
/// file; see README for the key list.
struct PipelineConfig {
    std::filesystem::path trips;
    std::filesystem::path epidemic;
    std::filesystem::path vaccination;
    std::filesystem::path zones;
    std::filesystem::path output_dir = "out";

    TripSchema trip_columns;
    CountTableSchema epidemic_columns = default_epidemic_schema();
    CountTableSchema vaccination_columns = default_vaccination_schema();
    ZoneSchema zone_columns;

    AnalysisPeriod before{make_date(2020, 3, 9), make_date(2020, 12, 15)};
    AnalysisPeriod after{make_date(2020, 12, 16), make_date(2021, 5, 31)};

    bool smoothing = true;
    NormalizationMode dtw_normalization = NormalizationMode::ZScore;
    PointCost dtw_point_cost = PointCost::Absolute;
    int tlcc_max_offset = 30;
    double distance_threshold = kDefaultDistanceThreshold;
    FitMode fit_mode = FitMode::WithIntercept;
    unsigned threads = 1;

    /// Canonical `key = value` lines for every setting that affects results
    /// (threads and output directory excluded). Hashed into the manifest.
    [[nodiscard]] std::string canonical() const;
};

/// Parses config text. Relative paths are resolved against `base_dir`.
/// Unknown keys and malformed values raise ConfigError.
[[nodiscard]] PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace demand_pulse
