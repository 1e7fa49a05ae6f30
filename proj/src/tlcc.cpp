#include "demand_pulse/tlcc.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include <nlohmann/json.hpp>

#include "demand_pulse/correlation.hpp"
#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"
#include "demand_pulse/parallel.hpp"

namespace demand_pulse {

double tlcc_at(std::span<const double> x, std::span<const double> y, int offset) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::NotAligned, "lagged correlation inputs differ in length");
    }
    const auto n = static_cast<long>(x.size());
    const long lag = offset;
    if (n - std::labs(lag) < 3) {
        throw Error(ErrorKind::TooShort, "overlap at offset " + std::to_string(offset) + " is below 3 points");
    }
    // t runs over indices where both y[t] and x[t - lag] exist
    const long t0 = std::max(0L, lag);
    const long t1 = std::min(n, n + lag);
    const auto len = static_cast<std::size_t>(t1 - t0);
    return pearson(x.subspan(static_cast<std::size_t>(t0 - lag), len), y.subspan(static_cast<std::size_t>(t0), len));
}

double tlcc_at(const DateIndexedSeries& x, const DateIndexedSeries& y, int offset) {
    if (!std::equal(x.dates().begin(), x.dates().end(), y.dates().begin(), y.dates().end())) {
        throw Error(ErrorKind::NotAligned, "'" + x.label() + "' and '" + y.label() + "' are not on the same dates");
    }
    if (!x.is_contiguous()) throw Error(ErrorKind::MissingDate, "lagged correlation needs contiguous days");
    return tlcc_at(x.values(), y.values(), offset);
}

TlccProfile tlcc_sweep(std::span<const double> x, std::span<const double> y, int max_offset, unsigned threads) {
    if (max_offset < 0) throw Error(ErrorKind::ConfigError, "max offset must be non-negative");
    if (x.size() != y.size()) throw Error(ErrorKind::NotAligned, "lagged correlation inputs differ in length");
    if (static_cast<long>(x.size()) <= static_cast<long>(max_offset) + 3) {
        throw Error(ErrorKind::TooShort, "series of length " + std::to_string(x.size()) +
                                             " is too short for max offset " + std::to_string(max_offset));
    }
    TlccProfile p;
    const auto count = static_cast<std::size_t>(2 * max_offset + 1);
    p.offsets.resize(count);
    p.r_values.resize(count);
    for (std::size_t k = 0; k < count; ++k) p.offsets[k] = static_cast<int>(k) - max_offset;
    parallel_for(count, threads, [&](std::size_t k) {
        try {
            p.r_values[k] = tlcc_at(x, y, p.offsets[k]);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::TooShort) throw;
        }
    });

    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < count; ++k) {
        if (!p.r_values[k]) continue;
        if (!best) {
            best = k;
            continue;
        }
        const double r = *p.r_values[k], rb = *p.r_values[*best];
        const int o = p.offsets[k], ob = p.offsets[*best];
        if (r > rb || (r == rb && (std::abs(o) < std::abs(ob) || (std::abs(o) == std::abs(ob) && o < ob)))) {
            best = k;
        }
    }
    if (!best) throw Error(ErrorKind::ZeroVariance, "no offset produced a defined correlation");
    p.best_offset = p.offsets[*best];
    p.best_r = *p.r_values[*best];
    return p;
}

TlccProfile tlcc_sweep(const DateIndexedSeries& x, const DateIndexedSeries& y, int max_offset, unsigned threads) {
    if (!std::equal(x.dates().begin(), x.dates().end(), y.dates().begin(), y.dates().end())) {
        throw Error(ErrorKind::NotAligned, "'" + x.label() + "' and '" + y.label() + "' are not on the same dates");
    }
    if (!x.is_contiguous()) throw Error(ErrorKind::MissingDate, "lagged correlation needs contiguous days");
    return tlcc_sweep(x.values(), y.values(), max_offset, threads);
}

std::string interpret(const TlccProfile& profile, std::string_view x_label, std::string_view y_label) {
    const int k = profile.best_offset;
    if (k == 0) return "synchronous";
    const int days = std::abs(k);
    const std::string span = std::to_string(days) + (days == 1 ? " day" : " days");
    if (k > 0) return std::string(x_label) + " leads " + std::string(y_label) + " by " + span;
    return std::string(y_label) + " leads " + std::string(x_label) + " by " + span;
}

void write_profile_csv(std::ostream& out, const TlccProfile& profile) {
    out << "offset,r\n";
    for (std::size_t k = 0; k < profile.offsets.size(); ++k) {
        out << profile.offsets[k] << ',';
        if (profile.r_values[k]) out << format_real(*profile.r_values[k]);
        out << '\n';
    }
}

nlohmann::json summary_json(const TlccProfile& profile, std::string_view x_label, std::string_view y_label) {
    return {{"x", std::string(x_label)},
            {"y", std::string(y_label)},
            {"best_offset", profile.best_offset},
            {"best_r", profile.best_r},
            {"convention", profile.convention},
            {"verdict", interpret(profile, x_label, y_label)}};
}

}  // namespace demand_pulse
