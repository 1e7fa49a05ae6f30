#include "demand_pulse/config.hpp"

#include <fstream>
#include <functional>
#include <memory>
#include <vector>
#include <istream>
#include <sstream>

#include <openssl/evp.h>

#include "demand_pulse/csv.hpp"
#include "demand_pulse/error.hpp"

namespace demand_pulse {

namespace {

namespace fs = std::filesystem;

Date require_date(const std::string& key, const std::string& value) {
    auto d = parse_date(value);
    if (!d) throw Error(ErrorKind::ConfigError, key + ": expected YYYY-MM-DD, got '" + value + "'");
    return *d;
}

bool require_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
    if (value == "off" || value == "false" || value == "no" || value == "0") return false;
    throw Error(ErrorKind::ConfigError, key + ": expected on/off, got '" + value + "'");
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value)>;

std::map<std::string, Setter> setters(const fs::path& base_dir) {
    auto path_setter = [base_dir](fs::path PipelineConfig::*member) {
        return [base_dir, member](PipelineConfig& c, const std::string&, const std::string& v) {
            fs::path p(v);
            c.*member = p.is_absolute() ? p : base_dir / p;
        };
    };
    auto text = [](auto member_ptr) {
        return [member_ptr](PipelineConfig& c, const std::string&, const std::string& v) { member_ptr(c) = v; };
    };

    std::map<std::string, Setter> s;
    s["trips"] = path_setter(&PipelineConfig::trips);
    s["epidemic"] = path_setter(&PipelineConfig::epidemic);
    s["vaccination"] = path_setter(&PipelineConfig::vaccination);
    s["zones"] = path_setter(&PipelineConfig::zones);
    s["output_dir"] = path_setter(&PipelineConfig::output_dir);

    s["trips.column.start"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.start; });
    s["trips.column.end"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.end; });
    s["trips.column.seconds"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.seconds; });
    s["trips.column.miles"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.miles; });
    s["trips.column.pickup"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.pickup; });
    s["trips.column.dropoff"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.dropoff; });
    s["trips.column.fare"] = text([](PipelineConfig& c) -> std::string& { return c.trip_columns.fare; });

    const char* epi_daily[] = {"new_cases", "new_hospitalizations", "new_deaths"};
    const char* epi_cum[] = {"cum_cases", "cum_hospitalizations", "cum_deaths"};
    const char* vac_daily[] = {"new_first", "new_second", "new_total"};
    const char* vac_cum[] = {"cum_first", "cum_second", "cum_total"};
    s["epidemic.column.date"] = text([](PipelineConfig& c) -> std::string& { return c.epidemic_columns.date; });
    s["vaccination.column.date"] =
        text([](PipelineConfig& c) -> std::string& { return c.vaccination_columns.date; });
    for (std::size_t k = 0; k < 3; ++k) {
        s[std::string("epidemic.column.") + epi_daily[k]] =
            text([k](PipelineConfig& c) -> std::string& { return c.epidemic_columns.daily[k]; });
        s[std::string("epidemic.column.") + epi_cum[k]] =
            text([k](PipelineConfig& c) -> std::string& { return c.epidemic_columns.cumulative[k]; });
        s[std::string("vaccination.column.") + vac_daily[k]] =
            text([k](PipelineConfig& c) -> std::string& { return c.vaccination_columns.daily[k]; });
        s[std::string("vaccination.column.") + vac_cum[k]] =
            text([k](PipelineConfig& c) -> std::string& { return c.vaccination_columns.cumulative[k]; });
    }
    s["zones.column.id"] = text([](PipelineConfig& c) -> std::string& { return c.zone_columns.id; });
    s["zones.column.name"] = text([](PipelineConfig& c) -> std::string& { return c.zone_columns.name; });
    s["zones.column.population"] =
        text([](PipelineConfig& c) -> std::string& { return c.zone_columns.population; });
    s["zones.column.area"] = text([](PipelineConfig& c) -> std::string& { return c.zone_columns.area; });
    s["zones.column.density"] = text([](PipelineConfig& c) -> std::string& { return c.zone_columns.density; });

    s["before.start"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.before.start = require_date(k, v);
    };
    s["before.end"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.before.end = require_date(k, v);
    };
    s["after.start"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.after.start = require_date(k, v);
    };
    s["after.end"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.after.end = require_date(k, v);
    };
    s["smoothing"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        c.smoothing = require_bool(k, v);
    };
    s["dtw.normalization"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto mode = parse_normalization(v);
        if (!mode) throw Error(ErrorKind::ConfigError, k + ": expected zscore, minmax, or none");
        c.dtw_normalization = *mode;
    };
    s["dtw.point_cost"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto cost = parse_point_cost(v);
        if (!cost) throw Error(ErrorKind::ConfigError, k + ": expected absolute or squared");
        c.dtw_point_cost = *cost;
    };
    s["tlcc.max_offset"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto n = parse_integer(v);
        if (!n || *n < 1 || *n > 3650) throw Error(ErrorKind::ConfigError, k + ": expected an integer >= 1");
        c.tlcc_max_offset = static_cast<int>(*n);
    };
    s["spatial.distance_threshold"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto t = parse_real(v);
        if (!t || !(*t > 0.0)) throw Error(ErrorKind::ConfigError, k + ": expected a positive number");
        c.distance_threshold = *t;
    };
    s["spatial.fit_mode"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto mode = parse_fit_mode(v);
        if (!mode) throw Error(ErrorKind::ConfigError, k + ": expected intercept or origin");
        c.fit_mode = *mode;
    };
    s["threads"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
        auto n = parse_integer(v);
        if (!n || *n < 1 || *n > 1024) throw Error(ErrorKind::ConfigError, k + ": expected an integer >= 1");
        c.threads = static_cast<unsigned>(*n);
    };
    return s;
}

std::string to_hex(const unsigned char* bytes, unsigned int len) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[bytes[i] >> 4]);
        out.push_back(hex[bytes[i] & 0xF]);
    }
    return out;
}

}  // namespace

std::string PipelineConfig::canonical() const {
    std::ostringstream out;
    auto line = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
    line("trips.column.start", trip_columns.start);
    line("trips.column.end", trip_columns.end);
    line("trips.column.seconds", trip_columns.seconds);
    line("trips.column.miles", trip_columns.miles);
    line("trips.column.pickup", trip_columns.pickup);
    line("trips.column.dropoff", trip_columns.dropoff);
    line("trips.column.fare", trip_columns.fare);
    line("epidemic.column.date", epidemic_columns.date);
    line("vaccination.column.date", vaccination_columns.date);
    for (std::size_t k = 0; k < 3; ++k) {
        line("epidemic.column.daily." + std::to_string(k), epidemic_columns.daily[k]);
        line("epidemic.column.cumulative." + std::to_string(k), epidemic_columns.cumulative[k]);
        line("vaccination.column.daily." + std::to_string(k), vaccination_columns.daily[k]);
        line("vaccination.column.cumulative." + std::to_string(k), vaccination_columns.cumulative[k]);
    }
    line("zones.column.id", zone_columns.id);
    line("zones.column.name", zone_columns.name);
    line("zones.column.population", zone_columns.population);
    line("zones.column.area", zone_columns.area);
    line("zones.column.density", zone_columns.density);
    line("before.start", format_date(before.start));
    line("before.end", format_date(before.end));
    line("after.start", format_date(after.start));
    line("after.end", format_date(after.end));
    line("smoothing", smoothing ? "on" : "off");
    line("dtw.normalization", std::string(to_string(dtw_normalization)));
    line("dtw.point_cost", std::string(to_string(dtw_point_cost)));
    line("tlcc.max_offset", std::to_string(tlcc_max_offset));
    line("spatial.distance_threshold", format_real(distance_threshold));
    line("spatial.fit_mode", std::string(to_string(fit_mode)));
    return out.str();
}

PipelineConfig parse_config(std::istream& in, const fs::path& base_dir) {
    PipelineConfig config;
    const auto table = setters(base_dir);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto text = trim_view(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim_view(text.substr(0, eq)));
        const std::string value(trim_view(text.substr(eq + 1)));
        auto it = table.find(key);
        if (it == table.end()) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(config, key, value);
    }
    if (config.before.end < config.before.start) throw Error(ErrorKind::ConfigError, "before period is inverted");
    if (config.after.end < config.after.start) throw Error(ErrorKind::ConfigError, "after period is inverted");
    return config;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
    try {
        return parse_config(in, path.parent_path());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::InvariantViolation, "SHA-256 failed");
    }
    return to_hex(digest, len);
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error(ErrorKind::InvariantViolation, "SHA-256 context allocation failed");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> guard(ctx, &EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    return to_hex(digest, len);
}

}  // namespace demand_pulse
