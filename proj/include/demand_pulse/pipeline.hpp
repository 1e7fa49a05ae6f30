#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "demand_pulse/config.hpp"

namespace demand_pulse {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Stage { Ingest, Correlate, Dtw, Tlcc, Spatial, Report };

inline constexpr Stage kAllStages[] = {Stage::Ingest, Stage::Correlate, Stage::Dtw,
                                       Stage::Tlcc,   Stage::Spatial,   Stage::Report};

[[nodiscard]] std::string_view to_string(Stage stage) noexcept;

struct StageStats {
    std::string name;
    std::size_t rows_in = 0;
    std::size_t rows_out = 0;
    double seconds = 0.0;
};

struct RunManifest {
    std::string tool_version{kToolVersion};
    std::string config_hash;
    std::map<std::string, std::string> input_digests;  // role -> sha256
    std::vector<StageStats> stages;
    nlohmann::json decisions;
};

[[nodiscard]] nlohmann::json to_json(const RunManifest& manifest);

/// Every tunable choice in effect for `config`, for the manifest and bundle.
[[nodiscard]] nlohmann::json decisions_json(const PipelineConfig& config);

/// Throws IoError naming the first input file that does not exist.
void validate_inputs(const PipelineConfig& config);

/// Runs one stage against the intermediates under `config.output_dir` and
/// records it in `manifest.json` there. Errors are rethrown with the stage name.
StageStats run_stage(Stage stage, const PipelineConfig& config);

/// All stages in order. Inputs are checked before anything is written.
RunManifest run(const PipelineConfig& config);

// Series roster shared by the stages.
inline constexpr std::string_view kTargetLabel = "taxi_trips";
inline constexpr std::string_view kTlccLabels[] = {"cum_first_dose", "cum_second_dose", "cum_total_dose"};

}  // namespace demand_pulse
