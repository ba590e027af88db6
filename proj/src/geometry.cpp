#include "beamplan/geometry.hpp"

#include <cmath>
#include <numbers>

namespace beamplan {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

SectorTable build_sector_table(const ScenarioConfig& cfg) {
    SectorTable t;
    t.num_sectors = cfg.num_sectors;
    t.coverage = cfg.coverage_angle * std::numbers::pi / 180.0;
    t.bs_distance = cfg.road_distance;
    t.road_length = 2.0 * cfg.road_distance * std::tan(t.coverage / 2.0);
    t.sector_length = t.road_length / cfg.num_sectors;
    t.angle_edges.resize(cfg.num_sectors + 1);
    for (int s = 0; s <= cfg.num_sectors; ++s) {
        t.angle_edges[s] =
            std::atan((s * t.sector_length - t.road_length / 2.0) / t.bs_distance);
    }
    // pin the outer edges to +-coverage/2 exactly
    t.angle_edges.front() = -t.coverage / 2.0;
    t.angle_edges.back() = t.coverage / 2.0;
    return t;
}

std::optional<int> sector_of_position(double x, const SectorTable& table) {
    if (x < 0.0 || x >= table.road_length) return std::nullopt;
    int s = static_cast<int>(std::floor(x / table.sector_length)) + 1;
    if (s > table.num_sectors) s = table.num_sectors;  // x just below road_length
    return s;
}

LinkBudget build_link_budget(const ScenarioConfig& cfg, const SectorTable& table) {
    LinkBudget b;
    b.wavelength = kSpeedOfLight / cfg.carrier_freq;
    b.noise_power = dbm_to_watt(cfg.noise_psd) * cfg.bandwidth;
    b.gamma = b.wavelength * b.wavelength /
              (8.0 * std::numbers::pi * b.noise_power * table.sector_length * table.bs_distance);
    return b;
}

double snr_linear(double power_w, bool aligned, bool los, const LinkBudget& budget,
                  double sidelobe_ratio) {
    double snr = budget.gamma * power_w;
    return (aligned && los) ? snr : sidelobe_ratio * snr;
}

double outage_prob(double rate, double snr, double bandwidth) {
    if (rate <= 0.0) return 0.0;
    if (snr <= 0.0) return 1.0;
    return -std::expm1(-(std::exp2(rate / bandwidth) - 1.0) / snr);
}

double epsilon_outage_capacity(double snr, double eps, double bandwidth) {
    if (snr <= 0.0) return 0.0;
    return bandwidth * std::log2(1.0 - snr * std::log1p(-eps));
}

ThroughputPoint optimal_throughput(double snr, double pilot_fraction, double bandwidth) {
    if (snr <= 0.0) return {0.0, 0.0};
    auto value = [&](double eps) {
        return (1.0 - pilot_fraction) * (1.0 - eps) * epsilon_outage_capacity(snr, eps, bandwidth);
    };
    // golden-section search; the objective is unimodal in eps
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 1e-6, hi = 1.0 - 1e-6;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    while (hi - lo > 1e-13) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = value(x1);
        }
    }
    double eps = 0.5 * (lo + hi);
    return {value(eps), eps};
}

}  // namespace beamplan
