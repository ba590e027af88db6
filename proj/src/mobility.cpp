#include "beamplan/mobility.hpp"

#include <cmath>

namespace beamplan {

Trajectory simulate_trajectory(const ScenarioConfig& cfg, const SectorTable& table,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double gamma = cfg.memory;
    const double drive = std::sqrt(1.0 - gamma * gamma) * cfg.speed_std;

    Trajectory traj;
    TrajectoryPoint p{0.0, cfg.speed_mean};
    traj.push_back(p);
    while (p.x >= 0.0 && p.x < table.road_length) {
        double x_next = p.x + cfg.slot_duration * p.v;
        double v_next = gamma * p.v + (1.0 - gamma) * cfg.speed_mean + drive * noise(rng);
        p = {x_next, v_next};
        traj.push_back(p);
    }
    return traj;
}

MobilityChain estimate_chain(std::span<const Trajectory> trajectories, const SectorTable& table) {
    if (trajectories.empty()) throw ValidationError("estimate_chain: no trajectories given");
    const int S = table.num_sectors;
    const int exit = S;  // 0-based index of the exit state
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(S + 1, S + 1);

    auto state_of = [&](double x) {
        auto s = sector_of_position(x, table);
        return s ? *s - 1 : exit;
    };

    for (const auto& traj : trajectories) {
        for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
            int from = state_of(traj[k].x);
            if (from == exit) break;  // absorbed; nothing more to count
            counts(from, state_of(traj[k + 1].x)) += 1.0;
        }
    }

    MobilityChain chain;
    chain.P = Eigen::MatrixXd::Zero(S + 1, S + 1);
    for (int s = 0; s < S; ++s) {
        double total = counts.row(s).sum();
        if (total <= 0.0) {
            chain.unvisited.push_back(s + 1);
            chain.P(s, s) = 1.0;
        } else {
            chain.P.row(s) = counts.row(s) / total;
        }
    }
    chain.P(exit, exit) = 1.0;
    return chain;
}

MobilityChain estimate_mobility(const ScenarioConfig& cfg, const SectorTable& table,
                                int num_trajectories) {
    std::vector<Trajectory> trajectories;
    trajectories.reserve(num_trajectories);
    for (int i = 0; i < num_trajectories; ++i)
        trajectories.push_back(simulate_trajectory(cfg, table, derive_seed(cfg.seed, 0x6d0b + i)));
    auto chain = estimate_chain(trajectories, table);
    chain.slot_duration = cfg.slot_duration;
    return chain;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, long t) {
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd base = m;
    while (t > 0) {
        if (t & 1) result = result * base;
        base = base * base;
        t >>= 1;
    }
    return result;
}

Eigen::MatrixXd chain_power(const MobilityChain& chain, long t) {
    return matrix_power(chain.P, t);
}

}  // namespace beamplan
