#include "demand_pulse/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"
#include "demand_pulse/parallel.hpp"

namespace demand_pulse {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::NotAligned, "pearson inputs differ in length (" + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()) + ")");
    }
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorKind::TooShort, "pearson needs at least 3 points, got " + std::to_string(n));

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ZeroVariance, "pearson input is constant");
    // One radical keeps exact cases exact (r = +-1 for mirrored samples); split it
    // only when the product leaves the double range.
    const double prod = sxx * syy;
    const double denom = std::isfinite(prod) && prod > 0.0 ? std::sqrt(prod) : std::sqrt(sxx) * std::sqrt(syy);
    const double r = sxy / denom;
    return std::clamp(r, -1.0, 1.0);
}

double pearson(const DateIndexedSeries& x, const DateIndexedSeries& y) {
    if (!std::equal(x.dates().begin(), x.dates().end(), y.dates().begin(), y.dates().end())) {
        throw Error(ErrorKind::NotAligned, "'" + x.label() + "' and '" + y.label() + "' are not on the same dates");
    }
    return pearson(x.values(), y.values());
}

CorrelationMatrix correlation_matrix(std::span<const DateIndexedSeries> series, unsigned threads) {
    const std::size_t k = series.size();
    if (k < 2) throw Error(ErrorKind::TooShort, "correlation matrix needs at least 2 series");
    CorrelationMatrix m;
    for (const auto& s : series) m.labels.push_back(s.label());
    m.values.assign(k * k, std::nullopt);
    m.windows.assign(k * k, std::nullopt);

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) cells.emplace_back(i, j);
    }
    parallel_for(cells.size(), threads, [&](std::size_t c) {
        const auto [i, j] = cells[c];
        std::optional<double> r;
        std::optional<AnalysisPeriod> window;
        try {
            auto [a, b] = align_common_dates(series[i], series[j]);
            window.emplace(a.first_date(), a.last_date());
            r = i == j ? 1.0 : pearson(a, b);
        } catch (const Error&) {
            r.reset();
        }
        m.values[i * k + j] = m.values[j * k + i] = r;
        m.windows[i * k + j] = m.windows[j * k + i] = window;
    });
    return m;
}

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& m) {
    out << "label";
    for (const auto& l : m.labels) out << ',' << csv_escape(l);
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << csv_escape(m.labels[i]);
        for (std::size_t j = 0; j < m.size(); ++j) {
            out << ',';
            if (auto v = m.at(i, j)) out << format_real(*v);
        }
        out << '\n';
    }
}

nlohmann::json to_json(const CorrelationMatrix& m) {
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json windows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        nlohmann::json wrow = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) {
            const auto v = m.at(i, j);
            row.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
            const auto& w = m.windows[i * m.size() + j];
            wrow.push_back(w ? nlohmann::json{format_date(w->start), format_date(w->end)} : nlohmann::json(nullptr));
        }
        values.push_back(std::move(row));
        windows.push_back(std::move(wrow));
    }
    return {{"labels", m.labels}, {"values", values}, {"windows", windows}};
}

}  // namespace demand_pulse
