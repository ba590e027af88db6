#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "beamplan/config.hpp"
#include "beamplan/geometry.hpp"

namespace beamplan {

struct TrajectoryPoint {
    double x = 0;  // meters along the road
    double v = 0;  // m/s
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Gauss-Markov position/speed series starting at (x=0, v=speed_mean),
/// ending with the first sample off the road.
Trajectory simulate_trajectory(const ScenarioConfig& cfg, const SectorTable& table,
                               std::uint64_t seed);

/// Slot-level sector chain over num_sectors + 1 states; the last state is the
/// absorbing exit.
struct MobilityChain {
    Eigen::MatrixXd P;  // (S+1) x (S+1), rows sum to 1
    double slot_duration = 0;
    std::vector<int> unvisited;  // 1-based sectors never observed; rows default to self-loops
};

MobilityChain estimate_chain(std::span<const Trajectory> trajectories, const SectorTable& table);

/// Simulates `num_trajectories` seeded trajectories and estimates the chain.
MobilityChain estimate_mobility(const ScenarioConfig& cfg, const SectorTable& table,
                                int num_trajectories = 500);

/// P^t by repeated squaring.
Eigen::MatrixXd chain_power(const MobilityChain& chain, long t);
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, long t);

}  // namespace beamplan
