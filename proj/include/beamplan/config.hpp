#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace beamplan {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a belief update is fed an observation the model assigns
/// probability zero; signals a policy/model mismatch.
struct ImpossibleObservation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario parameters shared by every module.  Immutable after load; safe
/// to share read-only across workers.
struct ScenarioConfig {
    int num_antennas = 128;          // BS array size (informational)
    double coverage_angle = 90.0;    // degrees
    double slot_duration = 1e-4;     // seconds
    double road_distance = 20.0;     // meters, BS to road
    double bandwidth = 1e8;          // Hz
    double carrier_freq = 30e9;      // Hz
    double noise_psd = -163.0;       // dBm/Hz
    double pilot_fraction = 0.01;    // fraction of a slot used for pilots
    int handover_slots = 1;          // duration of a handover action
    double blockage_p10 = 1.25e-4;   // P(LOS -> blocked) per slot
    double blockage_p01 = 5e-4;      // P(blocked -> LOS) per slot
    double speed_mean = 30.0;        // m/s
    double speed_std = 10.0;         // m/s
    double memory = 0.2;             // speed-process memory, [0,1)
    int num_sectors = 8;
    double sidelobe_ratio = 0.01;    // side- to main-lobe gain ratio
    int symbols_per_slot = 1000;
    double bt_threshold = 4.605170185988091;  // ln(100): 1% noise-only false alarm
    double dt_threshold = 4.605170185988091;
    std::vector<int> dt_durations = {10, 20, 40};          // slots
    std::vector<double> power_levels = {0, 10, 20, 30, 40}; // dBm
    double lambda = 0.0;             // throughput/power trade-off, bits per microjoule
    int belief_set_size = 300;
    int episodes = 1000;
    std::uint64_t seed = 1;

    /// Throws ValidationError naming the offending field.
    void validate() const;

    /// Canonical flat key-value serialization (round-trips exactly).
    std::string to_kv_text() const;

    /// FNV-1a over the canonical serialization; embedded in artifacts.
    std::uint64_t hash() const;

    /// lambda is configured in bits per microjoule.
    double lambda_bits_per_joule() const { return lambda * 1e6; }
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// Applies a single `key value` override (same keys as the config file).
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Ordered list of config keys, as serialized.
const std::vector<std::string>& config_keys();

std::uint64_t fnv1a(std::string_view data);

/// Deterministic stream splitting: one base seed, many independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);
std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t stream);

}  // namespace beamplan
