#include "qclock/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "qclock/errors.hpp"

namespace qclock {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, int line, std::string_view key) {
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(line, std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

long parse_integer(std::string_view text, int line, std::string_view key) {
    text = trim(text);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError(line, std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> parse_list(std::string_view text, int line, std::string_view key) {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), line, key));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += format_double(values[i]);
    }
    return out;
}

const std::set<std::string, std::less<>> known_keys{
    "preset", "hbar",     "m0",         "mu",      "sigma0",        "u",           "d",           "B",
    "scheme", "thetas_deg", "sigma0_ladder", "rel_tol", "max_depth", "panel_order", "output_dir", "curve_points",
};

struct Entry {
    std::string value;
    int line;
};

} // namespace

void RunConfig::validate() const {
    physics.validate();
    quad.validate();
    if (sigma0_ladder.empty()) {
        throw ValidationError("sigma0_ladder must not be empty");
    }
    for (double s : sigma0_ladder) {
        physics_for(s).validate();
    }
    for (double theta : thetas_deg) {
        if (!(theta >= 0.0 && theta < 360.0)) {
            throw ValidationError("thetas_deg entries must lie in [0, 360)");
        }
    }
    if (curve_points < 2) {
        throw ValidationError("curve_points must be at least 2");
    }
    if (output_dir.empty()) {
        throw ValidationError("output_dir must not be empty");
    }
}

PhysicsConfig RunConfig::physics_for(double sigma0) const {
    PhysicsConfig p = physics;
    p.sigma0 = sigma0;
    return p;
}

RunConfig parse_config(std::string_view text, const std::vector<KeyValue>& overrides) {
    std::map<std::string, Entry, std::less<>> entries;

    int line_number = 0;
    while (!text.empty() || line_number == 0) {
        ++line_number;
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (text.empty()) {
                break;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_number, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys.contains(key)) {
            throw ParseError(line_number, "unknown key '" + key + "'");
        }
        if (entries.contains(key)) {
            throw ParseError(line_number, "duplicate key '" + key + "'");
        }
        entries[key] = Entry{value, line_number};
    }
    for (const auto& [key, value] : overrides) {
        if (!known_keys.contains(key)) {
            throw ParseError(0, "unknown override key '" + key + "'");
        }
        entries[key] = Entry{value, 0};
    }

    RunConfig cfg;
    if (const auto it = entries.find("preset"); it != entries.end()) {
        if (it->second.value == "I") {
            cfg.physics = preset_one();
        } else if (it->second.value == "II") {
            cfg.physics = preset_two();
        } else {
            throw ParseError(it->second.line, "preset must be I or II");
        }
    }

    auto number = [&entries](std::string_view key) -> std::optional<double> {
        const auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        return parse_double(it->second.value, it->second.line, key);
    };

    if (auto v = number("hbar")) cfg.physics.hbar = *v;
    if (auto v = number("m0")) cfg.physics.m0 = *v;
    if (auto v = number("u")) cfg.physics.u = *v;
    if (auto v = number("d")) cfg.physics.d = *v;
    if (auto v = number("B")) cfg.physics.B = *v;
    if (auto v = number("sigma0")) cfg.physics.sigma0 = *v;

    if (const auto it = entries.find("mu"); it != entries.end()) {
        if (it->second.value == "derived") {
            cfg.physics.mu = derived_default_moment(cfg.physics.hbar);
        } else if (it->second.value == "codata") {
            cfg.physics.mu = constants::neutron_moment_codata;
        } else {
            cfg.physics.mu = parse_double(it->second.value, it->second.line, "mu");
        }
    } else {
        cfg.physics.mu = derived_default_moment(cfg.physics.hbar);
    }

    if (const auto it = entries.find("scheme"); it != entries.end()) {
        const auto scheme = distribution::parse_scheme(it->second.value);
        if (!scheme) {
            throw ParseError(it->second.line, "unknown scheme '" + it->second.value + "'");
        }
        cfg.scheme = *scheme;
    }

    if (const auto it = entries.find("sigma0_ladder"); it != entries.end()) {
        cfg.sigma0_ladder = parse_list(it->second.value, it->second.line, "sigma0_ladder");
        if (!entries.contains("sigma0")) {
            cfg.physics.sigma0 = cfg.sigma0_ladder.front();
        }
    } else {
        cfg.sigma0_ladder = {cfg.physics.sigma0};
    }

    if (const auto it = entries.find("thetas_deg"); it != entries.end()) {
        cfg.thetas_deg = parse_list(it->second.value, it->second.line, "thetas_deg");
    } else {
        const double peak = rad_to_deg(cfg.physics.peak_phi());
        for (double offset : {0.0, 60.0, 90.0}) {
            cfg.thetas_deg.push_back(std::fmod(peak + offset, 360.0));
        }
    }

    if (auto v = number("rel_tol")) cfg.quad.rel_tol = *v;
    if (const auto it = entries.find("max_depth"); it != entries.end()) {
        cfg.quad.max_depth = static_cast<int>(parse_integer(it->second.value, it->second.line, "max_depth"));
    }
    if (const auto it = entries.find("panel_order"); it != entries.end()) {
        cfg.quad.panel_order = static_cast<int>(parse_integer(it->second.value, it->second.line, "panel_order"));
    }
    if (const auto it = entries.find("curve_points"); it != entries.end()) {
        const long points = parse_integer(it->second.value, it->second.line, "curve_points");
        if (points < 2) {
            throw ValidationError("curve_points must be at least 2");
        }
        cfg.curve_points = static_cast<std::size_t>(points);
    }
    if (const auto it = entries.find("output_dir"); it != entries.end()) {
        cfg.output_dir = it->second.value;
    }

    cfg.validate();
    return cfg;
}

std::string serialize(const RunConfig& cfg) {
    std::string out;
    auto put = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("hbar", format_double(cfg.physics.hbar));
    put("m0", format_double(cfg.physics.m0));
    put("mu", format_double(cfg.physics.mu));
    put("sigma0", format_double(cfg.physics.sigma0));
    put("u", format_double(cfg.physics.u));
    put("d", format_double(cfg.physics.d));
    put("B", format_double(cfg.physics.B));
    put("scheme", std::string(distribution::scheme_name(cfg.scheme)));
    put("thetas_deg", format_list(cfg.thetas_deg));
    put("sigma0_ladder", format_list(cfg.sigma0_ladder));
    put("rel_tol", format_double(cfg.quad.rel_tol));
    put("max_depth", std::to_string(cfg.quad.max_depth));
    put("panel_order", std::to_string(cfg.quad.panel_order));
    put("output_dir", cfg.output_dir);
    put("curve_points", std::to_string(cfg.curve_points));
    return out;
}

} // namespace qclock
