#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "beamplan/config.hpp"

namespace beamplan {

/// Equal-length road sectors and their angular supports as seen from the BS.
struct SectorTable {
    int num_sectors = 0;
    double coverage = 0;       // radians
    double road_length = 0;    // meters
    double sector_length = 0;  // meters
    double bs_distance = 0;    // meters
    std::vector<double> angle_edges;  // radians, size num_sectors + 1

    /// Angular interval of sector s (1-based).
    std::pair<double, double> interval(int s) const {
        return {angle_edges[s - 1], angle_edges[s]};
    }
};

SectorTable build_sector_table(const ScenarioConfig& cfg);

/// Sector containing road position x, or nullopt once off the road.
std::optional<int> sector_of_position(double x, const SectorTable& table);

struct LinkBudget {
    double gamma = 0;        // SNR per transmit watt (1/W)
    double noise_power = 0;  // W over the full bandwidth
    double wavelength = 0;   // m
};

LinkBudget build_link_budget(const ScenarioConfig& cfg, const SectorTable& table);

/// Sectored-antenna receive SNR: full gain when aligned with LOS, side-lobe
/// ratio otherwise.
double snr_linear(double power_w, bool aligned, bool los, const LinkBudget& budget,
                  double sidelobe_ratio);

/// Probability that transmitting at `rate` fails under Rayleigh fading.
double outage_prob(double rate, double snr, double bandwidth);

/// Largest rate whose outage probability stays below eps.
double epsilon_outage_capacity(double snr, double eps, double bandwidth);

struct ThroughputPoint {
    double rate = 0;  // bps, maximized over the outage target
    double eps = 0;   // maximizing outage target
};

/// Maximizes (1-kappa)(1-eps)C_eps(snr) over eps in (0,1).
ThroughputPoint optimal_throughput(double snr, double pilot_fraction, double bandwidth);

}  // namespace beamplan
