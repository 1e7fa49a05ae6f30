#include "demand_pulse/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "demand_pulse/correlation.hpp"
#include "demand_pulse/csv.hpp"
#include "demand_pulse/dtw.hpp"
#include "demand_pulse/error.hpp"
#include "demand_pulse/ingest.hpp"
#include "demand_pulse/spatial.hpp"
#include "demand_pulse/tlcc.hpp"

namespace demand_pulse {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage stage) noexcept {
    switch (stage) {
        case Stage::Ingest: return "ingest";
        case Stage::Correlate: return "correlate";
        case Stage::Dtw: return "dtw";
        case Stage::Tlcc: return "tlcc";
        case Stage::Spatial: return "spatial";
        case Stage::Report: return "report";
    }
    return "unknown";
}

json to_json(const RunManifest& manifest) {
    json stages = json::array();
    for (const auto& s : manifest.stages) {
        stages.push_back({{"name", s.name}, {"rows_in", s.rows_in}, {"rows_out", s.rows_out}, {"seconds", s.seconds}});
    }
    return {{"tool_version", manifest.tool_version},
            {"config_hash", manifest.config_hash},
            {"input_digests", manifest.input_digests},
            {"stages", stages},
            {"decisions", manifest.decisions}};
}

json decisions_json(const PipelineConfig& config) {
    return {
        {"periods",
         {{"before", {format_date(config.before.start), format_date(config.before.end)}},
          {"after", {format_date(config.after.start), format_date(config.after.end)}}}},
        {"analysis_window", "after"},
        {"smoothing", config.smoothing ? "trailing_7_day_mean" : "off"},
        {"smoothing_partial_windows", "averaged_over_available_days"},
        {"zscore_std", "population"},
        {"trip_day", "pickup_timestamp_calendar_day"},
        {"cleaning_rule_order", "first_violation_in_order_1_to_6"},
        {"year_rule", "start_and_end_year_in_2018_2021"},
        {"duration_source", "recorded_column_else_end_minus_start"},
        {"zero_trip_days", "count_zero_mean_distance_missing"},
        {"correlation_alignment", "pairwise_complete"},
        {"dtw_normalization", std::string(to_string(config.dtw_normalization))},
        {"dtw_point_cost", std::string(to_string(config.dtw_point_cost))},
        {"dtw_tie_break", "diagonal_then_up_then_left"},
        {"dtw_window_constraint", "none"},
        {"dtw_path_length_bound", "max(n,m) <= K <= n+m-1"},
        {"tlcc_convention", std::string(kLagConvention)},
        {"tlcc_window", "truncate_to_overlap"},
        {"tlcc_max_offset", config.tlcc_max_offset},
        {"tlcc_tie_break", "smallest_abs_offset_then_negative"},
        {"distance_threshold_miles", config.distance_threshold},
        {"distance_threshold_comparison", "strict"},
        {"fit_mode", std::string(to_string(config.fit_mode))},
        {"per_capita_basis", "period_totals"},
        {"per_capita_note", "slope is invariant to daily-rate vs period-total scaling; intercept is not"},
    };
}

void validate_inputs(const PipelineConfig& config) {
    const std::pair<const char*, const fs::path*> inputs[] = {
        {"trips", &config.trips}, {"epidemic", &config.epidemic}, {"vaccination", &config.vaccination},
        {"zones", &config.zones}};
    for (const auto& [role, path] : inputs) {
        if (path->empty()) throw Error(ErrorKind::ConfigError, std::string("no '") + role + "' file configured");
        if (!fs::is_regular_file(*path)) {
            throw Error(ErrorKind::IoError, std::string(role) + " file not found: " + path->string());
        }
    }
}

namespace {

// ---------------------------------------------------------------------------
// File helpers

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::ifstream open_intermediate(const fs::path& path, Stage producer) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MissingIntermediate,
                    path.string() + " not found; run `demand-pulse " + std::string(to_string(producer)) + "` first");
    }
    return in;
}

json read_json(const fs::path& path, Stage producer) {
    auto in = open_intermediate(path, producer);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return in;
}

// ---------------------------------------------------------------------------
// Series roster

struct IndexedSeries {
    std::string label;
    SeriesGroup group = SeriesGroup::Other;
    DateIndexedSeries raw;
    DateIndexedSeries analysis;
};

SeriesGroup group_of(std::string_view label) {
    const bool cumulative = label.rfind("cum_", 0) == 0;
    const bool vaccine = label.find("dose") != std::string_view::npos;
    if (label == kTargetLabel) return SeriesGroup::Other;
    if (vaccine) return cumulative ? SeriesGroup::CumulativeVaccination : SeriesGroup::DailyVaccination;
    return cumulative ? SeriesGroup::CumulativeEpidemic : SeriesGroup::DailyEpidemic;
}

std::vector<IndexedSeries> load_index(const fs::path& out_dir) {
    const fs::path dir = out_dir / "ingest";
    const json index = read_json(dir / "series_index.json", Stage::Ingest);
    std::vector<IndexedSeries> roster;
    for (const auto& entry : index.at("series")) {
        IndexedSeries s;
        s.label = entry.at("label").get<std::string>();
        auto group = parse_series_group(entry.at("group").get<std::string>());
        if (!group) throw Error(ErrorKind::ParseError, "series_index.json: unknown group for " + s.label);
        s.group = *group;
        auto raw_in = open_intermediate(dir / entry.at("raw").get<std::string>(), Stage::Ingest);
        s.raw = read_series_csv(raw_in, s.label);
        auto an_in = open_intermediate(dir / entry.at("analysis").get<std::string>(), Stage::Ingest);
        s.analysis = read_series_csv(an_in, s.label);
        roster.push_back(std::move(s));
    }
    return roster;
}

const IndexedSeries& find_series(const std::vector<IndexedSeries>& roster, std::string_view label) {
    for (const auto& s : roster) {
        if (s.label == label) return s;
    }
    throw Error(ErrorKind::MissingIntermediate, "series '" + std::string(label) + "' missing from ingest output");
}

/// Restriction that yields an empty series instead of throwing.
DateIndexedSeries window_of(const DateIndexedSeries& s, const AnalysisPeriod& p) {
    try {
        return restrict(s, p);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyWindow) throw;
        return DateIndexedSeries(s.label(), {}, {}, s.unit());
    }
}

// ---------------------------------------------------------------------------
// Stages

StageStats stage_ingest(const PipelineConfig& config, RunManifest& manifest) {
    validate_inputs(config);
    StageStats stats{"ingest"};
    const fs::path dir = config.output_dir / "ingest";

    manifest.input_digests["trips"] = sha256_file(config.trips);
    manifest.input_digests["epidemic"] = sha256_file(config.epidemic);
    manifest.input_digests["vaccination"] = sha256_file(config.vaccination);
    manifest.input_digests["zones"] = sha256_file(config.zones);

    TripIngestResult trips;
    {
        auto in = open_input(config.trips);
        trips = ingest_trips(in, config.trip_columns, config.threads, config.trips.string());
    }
    if (trips.aggregate.empty()) {
        throw Error(ErrorKind::EmptyInput, config.trips.string() + ": no trips survived cleaning");
    }
    stats.rows_in = trips.report.rows_in;
    stats.rows_out = trips.report.rows_out;

    std::vector<EpidemicDaily> epidemic;
    std::vector<VaccinationDaily> vaccination;
    std::vector<ZoneInfo> zones;
    {
        auto in = open_input(config.epidemic);
        epidemic = parse_epidemic(in, config.epidemic_columns, config.epidemic.string());
    }
    {
        auto in = open_input(config.vaccination);
        vaccination = parse_vaccination(in, config.vaccination_columns, config.vaccination.string());
    }
    {
        auto in = open_input(config.zones);
        zones = parse_zones(in, config.zone_columns, config.zones.string());
    }
    if (epidemic.empty()) throw Error(ErrorKind::EmptyInput, config.epidemic.string() + ": no rows");
    if (vaccination.empty()) throw Error(ErrorKind::EmptyInput, config.vaccination.string() + ": no rows");

    const SeriesMap city = trips.aggregate.counts(AggregationKey::City);
    const SeriesMap by_zone = trips.aggregate.counts(AggregationKey::PickupZone);
    const SeriesMap by_od = trips.aggregate.counts(AggregationKey::OdPair);
    const SeriesMap city_miles = trips.aggregate.mean_distance(AggregationKey::City);
    const SeriesMap zone_miles = trips.aggregate.mean_distance(AggregationKey::PickupZone);

    write_json(dir / "cleaning_report.json", to_json(trips.report));
    write_file(dir / "city_daily.csv", [&](std::ostream& o) { write_keyed_csv(o, city); });
    write_file(dir / "zone_daily.csv", [&](std::ostream& o) { write_keyed_csv(o, by_zone); });
    write_file(dir / "od_daily.csv", [&](std::ostream& o) { write_keyed_csv(o, by_od, true); });
    write_file(dir / "city_mean_distance.csv", [&](std::ostream& o) { write_keyed_csv(o, city_miles); });
    write_file(dir / "zone_mean_distance.csv", [&](std::ostream& o) { write_keyed_csv(o, zone_miles); });
    write_file(dir / "zones.csv", [&](std::ostream& o) {
        o << "id,name,population,area,density\n";
        for (const auto& z : zones) {
            o << z.id << ',' << csv_escape(z.name) << ',' << format_real(z.population) << ','
              << format_real(z.area_sq_miles) << ',' << format_real(z.density) << '\n';
        }
    });

    std::vector<DateIndexedSeries> raw;
    raw.push_back(city.at(kCityKey).relabeled(std::string(kTargetLabel)));
    for (auto& s : epidemic_series(epidemic)) raw.push_back(std::move(s));
    for (auto& s : vaccination_series(vaccination)) raw.push_back(std::move(s));

    json index = {{"target", std::string(kTargetLabel)}, {"smoothing", config.smoothing}, {"series", json::array()}};
    json described = json::array();
    for (const auto& s : raw) {
        const DateIndexedSeries analysis = config.smoothing ? rolling_mean_7(s) : s;
        const std::string raw_rel = "series/" + s.label() + ".csv";
        const std::string an_rel = "analysis/" + s.label() + ".csv";
        write_file(dir / raw_rel, [&](std::ostream& o) { write_series_csv(o, s); });
        write_file(dir / an_rel, [&](std::ostream& o) { write_series_csv(o, analysis); });
        index["series"].push_back({{"label", s.label()},
                                   {"group", std::string(to_string(group_of(s.label())))},
                                   {"raw", raw_rel},
                                   {"analysis", an_rel},
                                   {"first_date", format_date(s.first_date())},
                                   {"last_date", format_date(s.last_date())}});
        for (auto [name, period] : {std::pair{"before", config.before}, std::pair{"after", config.after}}) {
            const auto w = window_of(s, period);
            if (w.empty()) continue;
            const auto st = describe(w.values());
            described.push_back({{"period", name},
                                 {"label", s.label()},
                                 {"count", st.count},
                                 {"mean", st.mean},
                                 {"std", st.std_dev},
                                 {"min", st.min},
                                 {"median", st.median},
                                 {"max", st.max}});
        }
    }
    write_json(dir / "series_index.json", index);
    write_json(dir / "descriptive_stats.json", described);
    write_file(dir / "descriptive_stats.csv", [&](std::ostream& o) {
        o << "period,label,count,mean,std,min,median,max\n";
        for (const auto& d : described) {
            o << d["period"].get<std::string>() << ',' << d["label"].get<std::string>() << ','
              << d["count"].get<std::size_t>() << ',' << format_real(d["mean"].get<double>()) << ','
              << format_real(d["std"].get<double>()) << ',' << format_real(d["min"].get<double>()) << ','
              << format_real(d["median"].get<double>()) << ',' << format_real(d["max"].get<double>()) << '\n';
        }
    });
    return stats;
}

StageStats stage_correlate(const PipelineConfig& config) {
    StageStats stats{"correlate"};
    const auto roster = load_index(config.output_dir);
    std::vector<DateIndexedSeries> windowed;
    for (const auto& s : roster) windowed.push_back(window_of(s.analysis, config.after).relabeled(s.label));
    const auto matrix = correlation_matrix(windowed, config.threads);
    stats.rows_in = windowed.size();
    for (const auto& v : matrix.values) stats.rows_out += v.has_value();

    const fs::path dir = config.output_dir / "correlate";
    write_file(dir / "matrix.csv", [&](std::ostream& o) { write_matrix_csv(o, matrix); });
    write_json(dir / "matrix.json", to_json(matrix));
    return stats;
}

StageStats stage_dtw(const PipelineConfig& config) {
    StageStats stats{"dtw"};
    const auto roster = load_index(config.output_dir);
    const auto target = window_of(find_series(roster, kTargetLabel).analysis, config.after);
    std::vector<DtwCandidate> candidates;
    for (const auto& s : roster) {
        if (s.label == kTargetLabel) continue;
        candidates.push_back({s.label, window_of(s.analysis, config.after), s.group});
    }
    const auto report =
        dtw_report(target, candidates, config.dtw_normalization, config.dtw_point_cost, config.threads);
    stats.rows_in = candidates.size();
    for (const auto& row : report.rows) stats.rows_out += row.result.has_value();

    const fs::path dir = config.output_dir / "dtw";
    write_file(dir / "distances.csv", [&](std::ostream& o) { write_report_csv(o, report); });
    json summary = to_json(report);
    summary["target"] = std::string(kTargetLabel);
    summary["window"] = {format_date(config.after.start), format_date(config.after.end)};
    write_json(dir / "summary.json", summary);
    for (const auto& row : report.rows) {
        if (row.result) write_json(dir / "paths" / (row.label + ".json"), to_json(*row.result));
    }
    return stats;
}

StageStats stage_tlcc(const PipelineConfig& config) {
    StageStats stats{"tlcc"};
    const auto roster = load_index(config.output_dir);
    const auto target = window_of(find_series(roster, kTargetLabel).analysis, config.after);
    const fs::path dir = config.output_dir / "tlcc";
    json results = json::array();
    for (auto label : kTlccLabels) {
        const auto x_full = window_of(find_series(roster, label).analysis, config.after);
        auto [x, y] = align_common_dates(x_full, target);
        const auto profile = tlcc_sweep(x, y, config.tlcc_max_offset, config.threads);
        write_file(dir / (std::string(label) + ".csv"), [&](std::ostream& o) { write_profile_csv(o, profile); });
        json entry = summary_json(profile, label, kTargetLabel);
        entry["window"] = {format_date(x.first_date()), format_date(x.last_date())};
        entry["profile"] = std::string(label) + ".csv";
        results.push_back(std::move(entry));
        ++stats.rows_in;
        ++stats.rows_out;
    }
    write_json(dir / "summary.json", {{"convention", std::string(kLagConvention)},
                                      {"max_offset", config.tlcc_max_offset},
                                      {"results", results}});
    return stats;
}

StageStats stage_spatial(const PipelineConfig& config) {
    StageStats stats{"spatial"};
    const fs::path in_dir = config.output_dir / "ingest";
    SeriesMap counts, miles;
    std::vector<ZoneInfo> zones;
    {
        auto in = open_intermediate(in_dir / "zone_daily.csv", Stage::Ingest);
        counts = read_keyed_csv(in, (in_dir / "zone_daily.csv").string());
    }
    {
        auto in = open_intermediate(in_dir / "zone_mean_distance.csv", Stage::Ingest);
        miles = read_keyed_csv(in, (in_dir / "zone_mean_distance.csv").string());
    }
    {
        auto in = open_intermediate(in_dir / "zones.csv", Stage::Ingest);
        zones = parse_zones(in, ZoneSchema{}, (in_dir / "zones.csv").string());
    }

    const auto before = zone_period_metrics(counts, miles, zones, config.before, PeriodName::Before);
    const auto after = zone_period_metrics(counts, miles, zones, config.after, PeriodName::After);

    std::vector<ZonePeriodMetrics> all;
    std::vector<std::pair<double, double>> points;
    std::vector<DistanceChange> changes;
    for (std::size_t i = 0; i < before.metrics.size(); ++i) {
        const auto& b = before.metrics[i];
        const auto& a = after.metrics[i];
        all.push_back(b);
        all.push_back(a);
        points.emplace_back(b.trips_per_1000, a.trips_per_1000);
        changes.push_back(
            classify_distance_change(b.mean_distance, a.mean_distance, config.distance_threshold, b.zone_id));
    }
    const auto fit = ols_fit(points, config.fit_mode);
    stats.rows_in = zones.size();
    stats.rows_out = points.size();

    const fs::path dir = config.output_dir / "spatial";
    write_file(dir / "zone_metrics.csv", [&](std::ostream& o) { write_zone_metrics_csv(o, all); });
    write_file(dir / "distance_change.csv", [&](std::ostream& o) { write_distance_change_csv(o, changes); });
    json fit_json = to_json(fit);
    fit_json["zero_population_zones"] = before.zero_population;
    fit_json["axes"] = "x = trips per 1000 residents before, y = after (period totals)";
    write_json(dir / "fit.json", fit_json);
    return stats;
}

// Reads a CSV intermediate as rows of strings (header first).
std::vector<std::vector<std::string>> read_table(const fs::path& path, Stage producer) {
    auto in = open_intermediate(path, producer);
    CsvReader reader(in);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        rows.push_back(fields);
    }
    return rows;
}

json table_json(const std::vector<std::vector<std::string>>& rows) {
    json out = json::array();
    if (rows.empty()) return out;
    // A column is integral when every non-empty cell is; keeps JSON types stable per column.
    std::vector<bool> integral(rows[0].size(), true);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < integral.size() && c < rows[r].size(); ++c) {
            const auto& cell = rows[r][c];
            if (!cell.empty() && (cell.find_first_of(".eE") != std::string::npos || !parse_integer(cell))) {
                integral[c] = false;
            }
        }
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        json obj = json::object();
        for (std::size_t c = 0; c < rows[0].size() && c < rows[r].size(); ++c) {
            const auto& cell = rows[r][c];
            if (cell.empty()) {
                obj[rows[0][c]] = nullptr;
            } else if (integral[c]) {
                obj[rows[0][c]] = *parse_integer(cell);
            } else if (auto v = parse_real(cell)) {
                obj[rows[0][c]] = *v;
            } else {
                obj[rows[0][c]] = cell;
            }
        }
        out.push_back(std::move(obj));
    }
    return out;
}

StageStats stage_report(const PipelineConfig& config) {
    StageStats stats{"report"};
    const fs::path root = config.output_dir;
    const fs::path dir = root / "report";

    const json cleaning = read_json(root / "ingest" / "cleaning_report.json", Stage::Ingest);
    const json described = read_json(root / "ingest" / "descriptive_stats.json", Stage::Ingest);
    const json matrix = read_json(root / "correlate" / "matrix.json", Stage::Correlate);
    const json dtw_summary = read_json(root / "dtw" / "summary.json", Stage::Dtw);
    json tlcc_summary = read_json(root / "tlcc" / "summary.json", Stage::Tlcc);
    const json fit = read_json(root / "spatial" / "fit.json", Stage::Spatial);
    const auto zone_rows = read_table(root / "spatial" / "zone_metrics.csv", Stage::Spatial);
    const auto change_rows = read_table(root / "spatial" / "distance_change.csv", Stage::Spatial);
    const auto roster = load_index(root);

    std::map<int, std::string> zone_names;
    for (const auto& row : read_table(root / "ingest" / "zones.csv", Stage::Ingest)) {
        if (auto id = parse_integer(row.at(0))) zone_names[static_cast<int>(*id)] = row.at(1);
    }

    // Fig 2: city taxi volume, daily and smoothed
    const auto& taxi = find_series(roster, kTargetLabel);
    const auto taxi_7d = rolling_mean_7(taxi.raw);
    write_file(dir / "fig2_taxi_volume.csv", [&](std::ostream& o) {
        o << "date,daily,rolling_7d\n";
        for (std::size_t i = 0; i < taxi.raw.size(); ++i) {
            o << format_date(taxi.raw.date_at(i)) << ',' << format_real(taxi.raw.value_at(i)) << ','
              << format_real(taxi_7d.value_at(i)) << '\n';
        }
    });

    // Fig 3: epidemic and vaccination series, wide by date
    write_file(dir / "fig3_epidemic_vaccination.csv", [&](std::ostream& o) {
        std::vector<const IndexedSeries*> cols;
        Date lo = Date::max(), hi = Date::min();
        for (const auto& s : roster) {
            if (s.label == kTargetLabel || s.raw.empty()) continue;
            cols.push_back(&s);
            lo = std::min(lo, s.raw.first_date());
            hi = std::max(hi, s.raw.last_date());
        }
        o << "date";
        for (const auto* s : cols) o << ',' << s->label;
        o << '\n';
        for (Date d = lo; !cols.empty() && d <= hi; d += std::chrono::days{1}) {
            o << format_date(d);
            for (const auto* s : cols) {
                o << ',';
                if (auto v = s->raw.find(d)) o << format_real(*v);
            }
            o << '\n';
        }
    });

    // Figs 4-5: per-zone normalized volume, before vs after
    std::map<int, std::pair<std::string, std::string>> per_zone;
    for (std::size_t r = 1; r < zone_rows.size(); ++r) {
        const auto& row = zone_rows[r];
        auto id = parse_integer(row.at(0));
        if (!id) continue;
        auto& slot = per_zone[static_cast<int>(*id)];
        (row.at(1) == "before" ? slot.first : slot.second) = row.at(3);
    }
    write_file(dir / "fig4_5_zone_volume.csv", [&](std::ostream& o) {
        o << "zone_id,name,before_trips_per_1000,after_trips_per_1000\n";
        for (const auto& [id, v] : per_zone) {
            o << id << ',' << csv_escape(zone_names[id]) << ',' << v.first << ',' << v.second << '\n';
        }
    });

    // Fig 6: distance change
    write_file(dir / "fig6_distance_change.csv", [&](std::ostream& o) {
        o << "zone_id,name,before_mean,after_mean,class\n";
        for (std::size_t r = 1; r < change_rows.size(); ++r) {
            const auto& row = change_rows[r];
            auto id = parse_integer(row.at(0));
            o << row.at(0) << ',' << csv_escape(id ? zone_names[static_cast<int>(*id)] : "") << ',' << row.at(1)
              << ',' << row.at(2) << ',' << row.at(3) << '\n';
        }
    });

    // Fig 7: correlation matrix
    fs::copy_file(root / "correlate" / "matrix.csv", dir / "fig7_correlation_matrix.csv",
                  fs::copy_options::overwrite_existing);
    // Figs 8-9: DTW distances
    fs::copy_file(root / "dtw" / "distances.csv", dir / "fig8_9_dtw_distances.csv",
                  fs::copy_options::overwrite_existing);

    // Fig 10: TLCC profiles, one column per lead series
    std::vector<std::vector<std::vector<std::string>>> profiles;
    for (auto& entry : tlcc_summary.at("results")) {
        const auto rows = read_table(root / "tlcc" / entry.at("profile").get<std::string>(), Stage::Tlcc);
        entry["profile"] = table_json(rows);
        profiles.push_back(rows);
    }
    write_file(dir / "fig10_tlcc_profiles.csv", [&](std::ostream& o) {
        o << "offset";
        for (const auto& entry : tlcc_summary.at("results")) o << ',' << entry.at("x").get<std::string>();
        o << '\n';
        const std::size_t n = profiles.empty() ? 0 : profiles.front().size();
        for (std::size_t r = 1; r < n; ++r) {
            o << profiles.front()[r].at(0);
            for (const auto& p : profiles) o << ',' << (r < p.size() ? p[r].at(1) : std::string{});
            o << '\n';
        }
    });

    json bundle = {
        {"schema_version", 1},
        {"tool_version", std::string(kToolVersion)},
        {"decisions", decisions_json(config)},
        {"cleaning", cleaning},
        {"descriptive_stats", described},
        {"correlation", matrix},
        {"dtw", dtw_summary},
        {"tlcc", tlcc_summary},
        {"spatial",
         {{"fit", fit}, {"zone_metrics", table_json(zone_rows)}, {"distance_change", table_json(change_rows)}}},
        {"files",
         {{"fig2", "fig2_taxi_volume.csv"},
          {"fig3", "fig3_epidemic_vaccination.csv"},
          {"fig4_5", "fig4_5_zone_volume.csv"},
          {"fig6", "fig6_distance_change.csv"},
          {"fig7", "fig7_correlation_matrix.csv"},
          {"fig8_9", "fig8_9_dtw_distances.csv"},
          {"fig10", "fig10_tlcc_profiles.csv"}}},
    };
    write_json(dir / "bundle.json", bundle);
    stats.rows_in = roster.size();
    stats.rows_out = 1;
    return stats;
}

StageStats dispatch(Stage stage, const PipelineConfig& config, RunManifest& manifest) {
    switch (stage) {
        case Stage::Ingest: return stage_ingest(config, manifest);
        case Stage::Correlate: return stage_correlate(config);
        case Stage::Dtw: return stage_dtw(config);
        case Stage::Tlcc: return stage_tlcc(config);
        case Stage::Spatial: return stage_spatial(config);
        case Stage::Report: return stage_report(config);
    }
    throw Error(ErrorKind::InvariantViolation, "unknown stage");
}

RunManifest load_manifest(const PipelineConfig& config) {
    RunManifest m;
    const fs::path path = config.output_dir / "manifest.json";
    if (fs::is_regular_file(path)) {
        std::ifstream in(path);
        try {
            const json j = json::parse(in);
            // Stage entries survive only if they were produced under the same config.
            if (j.value("config_hash", std::string{}) == sha256_hex(config.canonical())) {
                m.input_digests = j.value("input_digests", std::map<std::string, std::string>{});
                for (const auto& s : j.value("stages", json::array())) {
                    m.stages.push_back({s.at("name").get<std::string>(), s.at("rows_in").get<std::size_t>(),
                                        s.at("rows_out").get<std::size_t>(), s.at("seconds").get<double>()});
                }
            }
        } catch (const json::exception&) {
            // unreadable manifest is rebuilt from scratch
        }
    }
    m.config_hash = sha256_hex(config.canonical());
    m.decisions = decisions_json(config);
    return m;
}

void record_stage(RunManifest& m, const StageStats& stats) {
    auto it = std::find_if(m.stages.begin(), m.stages.end(), [&](const StageStats& s) { return s.name == stats.name; });
    if (it != m.stages.end()) {
        *it = stats;
    } else {
        m.stages.push_back(stats);
    }
    std::stable_sort(m.stages.begin(), m.stages.end(), [](const StageStats& a, const StageStats& b) {
        auto rank = [](const std::string& n) {
            for (std::size_t i = 0; i < std::size(kAllStages); ++i) {
                if (to_string(kAllStages[i]) == n) return i;
            }
            return std::size(kAllStages);
        };
        return rank(a.name) < rank(b.name);
    });
}

StageStats execute(Stage stage, const PipelineConfig& config, RunManifest& manifest) {
    const auto t0 = std::chrono::steady_clock::now();
    StageStats stats;
    try {
        stats = dispatch(stage, config, manifest);
    } catch (const Error& e) {
        throw Error(e.kind(), "stage '" + std::string(to_string(stage)) + "': " + e.what());
    } catch (const fs::filesystem_error& e) {
        throw Error(ErrorKind::IoError, "stage '" + std::string(to_string(stage)) + "': " + e.what());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, "stage '" + std::string(to_string(stage)) + "': " + e.what());
    }
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record_stage(manifest, stats);
    return stats;
}

}  // namespace

StageStats run_stage(Stage stage, const PipelineConfig& config) {
    if (stage == Stage::Ingest) validate_inputs(config);
    RunManifest manifest = load_manifest(config);
    auto stats = execute(stage, config, manifest);
    write_json(config.output_dir / "manifest.json", to_json(manifest));
    return stats;
}

RunManifest run(const PipelineConfig& config) {
    validate_inputs(config);
    RunManifest manifest;
    manifest.config_hash = sha256_hex(config.canonical());
    manifest.decisions = decisions_json(config);
    for (Stage stage : kAllStages) execute(stage, config, manifest);
    write_json(config.output_dir / "manifest.json", to_json(manifest));
    return manifest;
}

}  // namespace demand_pulse
