#include "beamplan/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace beamplan {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_int_list(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string fmt_double_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(v[i]);
    }
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as number");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as integer");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss{value};
    while (std::getline(ss, cur, ',')) {
        auto t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"num_antennas", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.num_antennas = static_cast<int>(parse_int(k, v)); }},
        {"coverage_angle", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.coverage_angle = parse_double(k, v); }},
        {"slot_duration", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.slot_duration = parse_double(k, v); }},
        {"road_distance", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.road_distance = parse_double(k, v); }},
        {"bandwidth", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.bandwidth = parse_double(k, v); }},
        {"carrier_freq", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.carrier_freq = parse_double(k, v); }},
        {"noise_psd", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.noise_psd = parse_double(k, v); }},
        {"pilot_fraction", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.pilot_fraction = parse_double(k, v); }},
        {"handover_slots", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.handover_slots = static_cast<int>(parse_int(k, v)); }},
        {"blockage_p10", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.blockage_p10 = parse_double(k, v); }},
        {"blockage_p01", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.blockage_p01 = parse_double(k, v); }},
        {"speed_mean", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.speed_mean = parse_double(k, v); }},
        {"speed_std", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.speed_std = parse_double(k, v); }},
        {"memory", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.memory = parse_double(k, v); }},
        {"num_sectors", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.num_sectors = static_cast<int>(parse_int(k, v)); }},
        {"sidelobe_ratio", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.sidelobe_ratio = parse_double(k, v); }},
        {"symbols_per_slot", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.symbols_per_slot = static_cast<int>(parse_int(k, v)); }},
        {"bt_threshold", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.bt_threshold = parse_double(k, v); }},
        {"dt_threshold", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.dt_threshold = parse_double(k, v); }},
        {"dt_durations", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.dt_durations.clear();
             for (const auto& item : split_list(v)) c.dt_durations.push_back(static_cast<int>(parse_int(k, item)));
         }},
        {"power_levels", [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.power_levels.clear();
             for (const auto& item : split_list(v)) c.power_levels.push_back(parse_double(k, item));
         }},
        {"lambda", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.lambda = parse_double(k, v); }},
        {"belief_set_size", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.belief_set_size = static_cast<int>(parse_int(k, v)); }},
        {"episodes", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.episodes = static_cast<int>(parse_int(k, v)); }},
        {"seed", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
    };
    return table;
}

void check(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError("config: " + msg);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "num_antennas", "coverage_angle", "slot_duration", "road_distance",
        "bandwidth", "carrier_freq", "noise_psd", "pilot_fraction",
        "handover_slots", "blockage_p10", "blockage_p01", "speed_mean",
        "speed_std", "memory", "num_sectors", "sidelobe_ratio",
        "symbols_per_slot", "bt_threshold", "dt_threshold", "dt_durations",
        "power_levels", "lambda", "belief_set_size", "episodes", "seed"};
    return keys;
}

void ScenarioConfig::validate() const {
    check(num_antennas > 0, "num_antennas must be positive");
    check(coverage_angle > 0 && coverage_angle < 180, "coverage_angle must lie in (0, 180) degrees");
    check(slot_duration > 0, "slot_duration must be positive");
    check(road_distance > 0, "road_distance must be positive");
    check(bandwidth > 0, "bandwidth must be positive");
    check(carrier_freq > 0, "carrier_freq must be positive");
    check(std::isfinite(noise_psd), "noise_psd must be finite");
    check(pilot_fraction > 0 && pilot_fraction < 1, "pilot_fraction must lie in (0, 1)");
    check(handover_slots >= 1, "handover_slots must be >= 1");
    check(blockage_p10 >= 0 && blockage_p10 <= 1, "blockage_p10 must lie in [0, 1]");
    check(blockage_p01 >= 0 && blockage_p01 <= 1, "blockage_p01 must lie in [0, 1]");
    check(std::isfinite(speed_mean), "speed_mean must be finite");
    check(speed_std >= 0, "speed_std must be non-negative");
    check(memory >= 0 && memory < 1, "memory must lie in [0, 1)");
    check(num_sectors >= 2, "num_sectors must be >= 2");
    check(sidelobe_ratio > 0 && sidelobe_ratio < 1, "sidelobe_ratio must lie in (0, 1)");
    check(symbols_per_slot > 0, "symbols_per_slot must be positive");
    check(bt_threshold > 0, "bt_threshold must be positive");
    check(dt_threshold > 0, "dt_threshold must be positive");
    check(!dt_durations.empty(), "dt_durations must be non-empty");
    for (int t : dt_durations) check(t >= 2, "dt_durations entries must be >= 2 (data + feedback slot)");
    check(!power_levels.empty(), "power_levels must be non-empty");
    for (double p : power_levels) check(std::isfinite(p), "power_levels entries must be finite");
    check(lambda >= 0, "lambda must be non-negative");
    check(belief_set_size >= 1, "belief_set_size must be >= 1");
    check(episodes >= 1, "episodes must be >= 1");
}

std::string ScenarioConfig::to_kv_text() const {
    std::string out;
    auto emit = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    };
    emit("num_antennas", std::to_string(num_antennas));
    emit("coverage_angle", fmt_double(coverage_angle));
    emit("slot_duration", fmt_double(slot_duration));
    emit("road_distance", fmt_double(road_distance));
    emit("bandwidth", fmt_double(bandwidth));
    emit("carrier_freq", fmt_double(carrier_freq));
    emit("noise_psd", fmt_double(noise_psd));
    emit("pilot_fraction", fmt_double(pilot_fraction));
    emit("handover_slots", std::to_string(handover_slots));
    emit("blockage_p10", fmt_double(blockage_p10));
    emit("blockage_p01", fmt_double(blockage_p01));
    emit("speed_mean", fmt_double(speed_mean));
    emit("speed_std", fmt_double(speed_std));
    emit("memory", fmt_double(memory));
    emit("num_sectors", std::to_string(num_sectors));
    emit("sidelobe_ratio", fmt_double(sidelobe_ratio));
    emit("symbols_per_slot", std::to_string(symbols_per_slot));
    emit("bt_threshold", fmt_double(bt_threshold));
    emit("dt_threshold", fmt_double(dt_threshold));
    emit("dt_durations", fmt_int_list(dt_durations));
    emit("power_levels", fmt_double_list(power_levels));
    emit("lambda", fmt_double(lambda));
    emit("belief_set_size", std::to_string(belief_set_size));
    emit("episodes", std::to_string(episodes));
    emit("seed", std::to_string(seed));
    return out;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t ScenarioConfig::hash() const { return fnv1a(to_kv_text()); }

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, trim(value));
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::size_t line_no = 0;
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
        ++line_no;
        auto stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value', got '" + stripped + "'");
        auto key = trim(stripped.substr(0, eq));
        auto value = trim(stripped.substr(eq + 1));
        apply_override(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file '" + path + "'");
    out << cfg.to_kv_text();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 over (base, stream); independent streams for parallel use
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t stream) {
    return std::mt19937_64(derive_seed(base, stream));
}

}  // namespace beamplan
