#include "demand_pulse/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"
#include "demand_pulse/parallel.hpp"

namespace demand_pulse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_cost(double a, double b, PointCost cost) noexcept {
    const double d = a - b;
    return cost == PointCost::Absolute ? std::abs(d) : d * d;
}

}  // namespace

std::string_view to_string(PointCost cost) noexcept {
    return cost == PointCost::Absolute ? "absolute" : "squared";
}

std::optional<PointCost> parse_point_cost(std::string_view text) noexcept {
    if (text == "absolute") return PointCost::Absolute;
    if (text == "squared") return PointCost::Squared;
    return std::nullopt;
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) throw Error(ErrorKind::EmptyInput, "cost matrix needs non-empty inputs");
    if (cells_.size() != rows_ * cols_) throw Error(ErrorKind::InvariantViolation, "cost matrix size mismatch");
    for (double c : cells_) {
        if (!(c >= 0.0)) throw Error(ErrorKind::InvariantViolation, "cost matrix cell is negative or NaN");
    }
}

CostMatrix pointwise_cost(std::span<const double> q, std::span<const double> c, PointCost cost) {
    if (q.empty() || c.empty()) throw Error(ErrorKind::EmptyInput, "pointwise cost of an empty series");
    std::vector<double> cells(q.size() * c.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) cells[i * c.size() + j] = point_cost(q[i], c[j], cost);
    }
    return CostMatrix(q.size(), c.size(), std::move(cells));
}

CostMatrix pointwise_cost(const DateIndexedSeries& q, const DateIndexedSeries& c, PointCost cost) {
    return pointwise_cost(q.values(), c.values(), cost);
}

std::optional<std::string> path_violation(std::span<const PathStep> path, std::size_t n, std::size_t m) {
    if (path.empty()) return "path is empty";
    if (path.front() != PathStep{1, 1}) return "path does not start at (1,1)";
    if (path.back() != PathStep{n, m}) return "path does not end at (n,m)";
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto& a = path[k - 1];
        const auto& b = path[k];
        const bool di_ok = b.i == a.i || b.i == a.i + 1;
        const bool dj_ok = b.j == a.j || b.j == a.j + 1;
        if (!di_ok || !dj_ok) return "step " + std::to_string(k + 1) + " is not continuous and monotone";
        if (b == a) return "step " + std::to_string(k + 1) + " repeats the previous cell";
    }
    const std::size_t k = path.size();
    if (k < std::max(n, m) || k > n + m - 1) return "path length outside [max(n,m), n+m-1]";
    return std::nullopt;
}

DtwResult dtw_distance(const CostMatrix& cost) {
    const std::size_t n = cost.rows(), m = cost.cols();
    // acc(i, j) is the cumulative distance ending at 0-based cell (i, j)
    std::vector<double> acc(n * m, kInf);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return acc[i * m + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                const double diag = (i > 0 && j > 0) ? at(i - 1, j - 1) : kInf;
                const double up = i > 0 ? at(i - 1, j) : kInf;
                const double left = j > 0 ? at(i, j - 1) : kInf;
                best = std::min({diag, up, left});
            }
            at(i, j) = cost(i, j) + best;
        }
    }

    WarpingPath path;
    std::size_t i = n - 1, j = m - 1;
    path.push_back({i + 1, j + 1});
    while (i > 0 || j > 0) {
        const double diag = (i > 0 && j > 0) ? at(i - 1, j - 1) : kInf;
        const double up = i > 0 ? at(i - 1, j) : kInf;
        const double left = j > 0 ? at(i, j - 1) : kInf;
        if (diag <= up && diag <= left) {
            --i;
            --j;
        } else if (up <= left) {
            --i;
        } else {
            --j;
        }
        path.push_back({i + 1, j + 1});
    }
    std::reverse(path.begin(), path.end());
    return {at(n - 1, m - 1), std::move(path), NormalizationMode::None};
}

double dtw_distance_only(std::span<const double> q, std::span<const double> c, PointCost cost) {
    if (q.empty() || c.empty()) throw Error(ErrorKind::EmptyInput, "DTW of an empty series");
    // The recurrence is symmetric under transposition, so keep the shorter
    // series along the row buffer.
    if (c.size() > q.size()) std::swap(q, c);
    const std::size_t m = c.size();
    std::vector<double> prev(m, kInf), cur(m, kInf);
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                const double diag = (i > 0 && j > 0) ? prev[j - 1] : kInf;
                const double up = i > 0 ? prev[j] : kInf;
                const double left = j > 0 ? cur[j - 1] : kInf;
                best = std::min({diag, up, left});
            }
            cur[j] = point_cost(q[i], c[j], cost) + best;
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

DtwResult dtw(const DateIndexedSeries& q, const DateIndexedSeries& c, NormalizationMode mode, PointCost cost) {
    auto result = dtw_distance(pointwise_cost(normalize(q, mode), normalize(c, mode), cost));
    result.normalization = mode;
    return result;
}

nlohmann::json to_json(const DtwResult& result) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& s : result.path) path.push_back({s.i, s.j});
    return {{"distance", result.distance},
            {"normalization_mode", std::string(to_string(result.normalization))},
            {"path", path}};
}

std::string_view to_string(SeriesGroup group) noexcept {
    switch (group) {
        case SeriesGroup::DailyEpidemic: return "daily_epidemic";
        case SeriesGroup::CumulativeEpidemic: return "cumulative_epidemic";
        case SeriesGroup::DailyVaccination: return "daily_vaccination";
        case SeriesGroup::CumulativeVaccination: return "cumulative_vaccination";
        case SeriesGroup::Other: return "other";
    }
    return "other";
}

std::optional<SeriesGroup> parse_series_group(std::string_view text) noexcept {
    for (auto g : {SeriesGroup::DailyEpidemic, SeriesGroup::CumulativeEpidemic, SeriesGroup::DailyVaccination,
                   SeriesGroup::CumulativeVaccination, SeriesGroup::Other}) {
        if (to_string(g) == text) return g;
    }
    return std::nullopt;
}

DtwReport dtw_report(const DateIndexedSeries& target, std::span<const DtwCandidate> candidates,
                     NormalizationMode mode, PointCost cost, unsigned threads) {
    DtwReport report;
    report.normalization = mode;
    report.cost = cost;
    report.rows.resize(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t k) {
        const auto& cand = candidates[k];
        auto& row = report.rows[k];
        row.label = cand.label;
        row.group = cand.group;
        try {
            row.result = dtw(cand.series, target, mode, cost);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::ZeroRange &&
                e.kind() != ErrorKind::TooShort && e.kind() != ErrorKind::EmptyInput) {
                throw;
            }
            row.error = e.what();
        }
    });

    std::map<SeriesGroup, std::pair<double, std::size_t>> sums;
    for (const auto& row : report.rows) {
        if (!row.result) continue;
        auto& [sum, n] = sums[row.group];
        sum += row.result->distance;
        ++n;
    }
    for (const auto& [g, s] : sums) report.group_means[g] = s.first / static_cast<double>(s.second);
    return report;
}

void write_report_csv(std::ostream& out, const DtwReport& report) {
    out << "label,distance,group\n";
    for (const auto& row : report.rows) {
        out << csv_escape(row.label) << ',';
        if (row.result) out << format_real(row.result->distance);
        out << ',' << to_string(row.group) << '\n';
    }
}

nlohmann::json to_json(const DtwReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r = {{"label", row.label}, {"group", std::string(to_string(row.group))}};
        r["distance"] = row.result ? nlohmann::json(row.result->distance) : nlohmann::json(nullptr);
        if (!row.error.empty()) r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    nlohmann::json means = nlohmann::json::object();
    for (const auto& [g, v] : report.group_means) means[std::string(to_string(g))] = v;
    return {{"normalization_mode", std::string(to_string(report.normalization))},
            {"point_cost", std::string(to_string(report.cost))},
            {"rows", rows},
            {"group_means", means}};
}

}  // namespace demand_pulse
