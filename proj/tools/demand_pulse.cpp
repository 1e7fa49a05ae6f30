// demand-pulse: command-line driver for the taxi demand / epidemic analysis pipeline.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "demand_pulse/config.hpp"
#include "demand_pulse/dtw.hpp"
#include "demand_pulse/error.hpp"
#include "demand_pulse/pipeline.hpp"
#include "demand_pulse/tlcc.hpp"

namespace dp = demand_pulse;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int exit_code(dp::ErrorKind kind) {
    switch (kind) {
        case dp::ErrorKind::ConfigError: return kExitUsage;
        case dp::ErrorKind::InvariantViolation: return kExitInternal;
        default: return kExitData;
    }
}

struct CommonOptions {
    std::string config;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
};

dp::PipelineConfig load(const CommonOptions& opts) {
    if (opts.config.empty()) throw dp::Error(dp::ErrorKind::ConfigError, "--config is required");
    auto config = dp::load_config(opts.config);
    if (opts.threads) {
        if (*opts.threads == 0) throw dp::Error(dp::ErrorKind::ConfigError, "--threads must be >= 1");
        config.threads = *opts.threads;
    }
    if (opts.out) config.output_dir = *opts.out;
    return config;
}

dp::DateIndexedSeries load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dp::Error(dp::ErrorKind::IoError, "cannot open " + path);
    try {
        return dp::read_series_csv(in, fs::path(path).stem().string());
    } catch (const dp::Error& e) {
        throw dp::Error(e.kind(), path + ": " + e.what());
    }
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config, "Pipeline config file");
    if (config_required) c->required();
    cmd->add_option("--threads", opts.threads, "Worker threads (overrides config)");
    cmd->add_option("--out", opts.out, "Output directory (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Taxi demand vs epidemic and vaccination time-series analysis"};
    app.set_version_flag("--version", std::string(dp::kToolVersion));
    app.require_subcommand(1);

    CommonOptions opts;

    auto* run_cmd = app.add_subcommand("run", "Run every stage in order");
    add_common(run_cmd, opts, true);

    std::vector<std::pair<CLI::App*, dp::Stage>> stage_cmds;
    const std::pair<dp::Stage, const char*> help[] = {
        {dp::Stage::Ingest, "Clean trips, aggregate daily counts, load epidemic/vaccination/zone tables"},
        {dp::Stage::Correlate, "Pairwise correlation matrix over the analysis window"},
        {dp::Stage::Dtw, "DTW distance of every series to taxi volume"},
        {dp::Stage::Tlcc, "Lagged cross-correlation of cumulative vaccination vs taxi volume"},
        {dp::Stage::Spatial, "Per-zone normalized volume, distance change, and before/after fit"},
        {dp::Stage::Report, "Collate stage outputs into a JSON bundle and plot-ready CSVs"},
    };
    for (const auto& [stage, text] : help) {
        auto* cmd = app.add_subcommand(std::string(dp::to_string(stage)), text);
        stage_cmds.emplace_back(cmd, stage);
    }

    // Ad-hoc modes on plain `date,value` files.
    std::vector<std::string> dtw_series;
    std::string dtw_norm = "zscore";
    std::string dtw_cost = "absolute";
    std::string tlcc_x, tlcc_y;
    int tlcc_offset = dp::kDefaultMaxOffset;

    for (auto& [cmd, stage] : stage_cmds) {
        add_common(cmd, opts, stage != dp::Stage::Dtw && stage != dp::Stage::Tlcc);
        if (stage == dp::Stage::Dtw) {
            cmd->add_option("--series", dtw_series, "Two series files to align (ad-hoc mode)")->expected(2);
            cmd->add_option("--normalization", dtw_norm, "zscore, minmax, or none (ad-hoc mode)");
            cmd->add_option("--cost", dtw_cost, "absolute or squared (ad-hoc mode)");
        } else if (stage == dp::Stage::Tlcc) {
            cmd->add_option("--x", tlcc_x, "Leading candidate series file (ad-hoc mode)");
            cmd->add_option("--y", tlcc_y, "Lagging candidate series file (ad-hoc mode)");
            cmd->add_option("--max-offset", tlcc_offset, "Largest |offset| in days (ad-hoc mode)");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run_cmd) {
            auto config = load(opts);
            const auto manifest = dp::run(config);
            std::cerr << "wrote " << config.output_dir.string() << " (" << manifest.stages.size() << " stages)\n";
            return kExitOk;
        }
        for (const auto& [cmd, stage] : stage_cmds) {
            if (!*cmd) continue;
            if (stage == dp::Stage::Dtw && !dtw_series.empty()) {
                auto mode = dp::parse_normalization(dtw_norm);
                auto cost = dp::parse_point_cost(dtw_cost);
                if (!mode) throw dp::Error(dp::ErrorKind::ConfigError, "--normalization: expected zscore, minmax, or none");
                if (!cost) throw dp::Error(dp::ErrorKind::ConfigError, "--cost: expected absolute or squared");
                const auto q = load_series(dtw_series[0]);
                const auto c = load_series(dtw_series[1]);
                std::cout << dp::to_json(dp::dtw(q, c, *mode, *cost)).dump(2) << '\n';
                return kExitOk;
            }
            if (stage == dp::Stage::Tlcc && (!tlcc_x.empty() || !tlcc_y.empty())) {
                if (tlcc_x.empty() || tlcc_y.empty()) {
                    throw dp::Error(dp::ErrorKind::ConfigError, "ad-hoc tlcc needs both --x and --y");
                }
                if (tlcc_offset < 1) throw dp::Error(dp::ErrorKind::ConfigError, "--max-offset must be >= 1");
                const auto x = load_series(tlcc_x);
                const auto y = load_series(tlcc_y);
                const auto [xa, ya] = dp::align_common_dates(x, y);
                const auto profile = dp::tlcc_sweep(xa, ya, tlcc_offset, opts.threads.value_or(1));
                std::cout << dp::summary_json(profile, x.label(), y.label()).dump(2) << '\n';
                return kExitOk;
            }
            if (opts.config.empty()) {
                throw dp::Error(dp::ErrorKind::ConfigError,
                                std::string(dp::to_string(stage)) + ": --config is required outside ad-hoc mode");
            }
            auto config = load(opts);
            const auto stats = dp::run_stage(stage, config);
            std::cerr << stats.name << ": " << stats.rows_in << " in, " << stats.rows_out << " out\n";
            return kExitOk;
        }
    } catch (const dp::Error& e) {
        std::cerr << "demand-pulse: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "demand-pulse: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
