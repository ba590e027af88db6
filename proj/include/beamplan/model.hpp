#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamplan/blockage.hpp"
#include "beamplan/config.hpp"
#include "beamplan/geometry.hpp"
#include "beamplan/mobility.hpp"

namespace beamplan {

enum class ActionClass { Handover, BeamTrain, DataTransmit };

std::string to_string(ActionClass cls);

/// (class, sector set, target SNR, duration) action tuple.
struct ActionSpec {
    ActionClass cls = ActionClass::Handover;
    std::vector<int> sectors;  // scan list (BT, ascending), single target (DT), empty (HO)
    double target_snr = 0;     // linear receive SNR when aligned with LOS
    int duration = 1;          // slots, feedback slot included
    double power_dbm = 0;      // transmit level behind target_snr (HO: unused)

    std::string label() const;
    bool operator==(const ActionSpec&) const = default;
};

/// HO, exhaustive-scan BT, width-3 windowed BT and per-sector DT actions at
/// every configured power level.
std::vector<ActionSpec> build_catalog(const ScenarioConfig& cfg, const LinkBudget& budget);

/// Index layout for states (sector, serving BS, blockage pair); the absorbing
/// exit state lives past the end at index size().
struct StateSpace {
    int num_sectors = 0;

    int size() const { return 8 * num_sectors; }

    struct Fields {
        int sector = 1;  // 1-based
        int bs = 1;      // serving BS, 1 or 2
        int b1 = 1;      // LOS flag of BS 1
        int b2 = 1;
    };

    int index(int sector, int bs, int b1, int b2) const {
        return (((sector - 1) * 2 + (bs - 1)) * 2 + b1) * 2 + b2;
    }
    int index(const Fields& f) const { return index(f.sector, f.bs, f.b1, f.b2); }
    Fields fields(int idx) const {
        Fields f;
        f.b2 = idx & 1;
        f.b1 = (idx >> 1) & 1;
        f.bs = ((idx >> 2) & 1) + 1;
        f.sector = (idx >> 3) + 1;
        return f;
    }
    std::string label(int idx) const;
};

/// Per-action joint transition/observation factors plus stage payoffs.
///
/// The joint law factorizes as P(u', y | u, a) = trans(u, u') * obs(u, y) for
/// non-exit successors, with the exit override P(exit, y_exit | u, a) =
/// trans(u, exit).  obs rows carry no exit mass and sum to 1.
struct ActionKernel {
    Eigen::MatrixXd trans;   // U x (U + 1); last column is the exit successor
    Eigen::MatrixXd obs;     // U x num_obs (non-exit observations)
    Eigen::VectorXd reward;  // expected bits per epoch
    Eigen::VectorXd energy;  // joules per epoch
    int duration = 1;
};

/// Model in the generic planner form: states, non-exit observations, one
/// kernel per action.  Built from the mm-wave scenario or constructed
/// directly for small test problems.
struct PomdpModel {
    int num_states = 0;
    int num_obs = 0;  // non-exit observations; index num_obs denotes the exit signal
    std::vector<ActionSpec> catalog;
    std::vector<ActionKernel> actions;
    std::vector<std::string> state_labels;
    std::vector<std::string> obs_labels;  // size num_obs + 1, last = exit
    std::vector<std::string> action_labels;

    int exit_state() const { return num_states; }
    int exit_obs() const { return num_obs; }

    double joint(int a, int u, int u_next, int y) const;

    /// max_{u,a} |1 - sum_{u',y} P(u',y | u, a)|
    double max_normalization_error() const;
};

/// Everything needed to plan and to simulate one scenario.
struct SystemModel {
    ScenarioConfig cfg;
    SectorTable table;
    LinkBudget budget;
    MobilityChain mobility;
    BlockageChain blockage1;
    BlockageChain blockage2;
    PomdpModel pomdp;

    const BlockageChain& serving_chain(int bs) const { return bs == 1 ? blockage1 : blockage2; }
};

SystemModel build_system(const ScenarioConfig& cfg, int num_trajectories = 500);

/// P(matched-filter output > eta) with exponential output of mean
/// 1 + pilot_symbols * snr_rx.
double detection_prob(double snr_rx, double eta, double pilot_symbols);

/// Detection thresholds scale with the side-lobe floor so the false-alarm
/// rate against non-target beams stays at exp(-base_eta) per beam.
double effective_threshold(double base_eta, double pilot_symbols, double sidelobe_ratio,
                           double target_snr);

/// P(argmax = i and max > eta) for independent exponentials with the given
/// means, plus the all-below-threshold mass in the last entry.
std::vector<double> bt_feedback_dist(const std::vector<double>& means, double eta);

/// Matched-filter means seen during a BT scan from epoch-start state u.
std::vector<double> bt_scan_means(const ScenarioConfig& cfg, const StateSpace::Fields& u,
                                  const ActionSpec& action);

double dt_pilot_mean(const ScenarioConfig& cfg, const StateSpace::Fields& u,
                     const ActionSpec& action);

/// Expected bits delivered over a DT session started in state u; zero for
/// HO/BT.
double action_reward(const SystemModel& model, const StateSpace::Fields& u,
                     const ActionSpec& action);

/// Transmit energy: power * slot_duration * (duration - 1); the feedback slot
/// is unpowered.
double action_energy(const ScenarioConfig& cfg, const LinkBudget& budget,
                     const ActionSpec& action);

double lagrangian(const SystemModel& model, const StateSpace::Fields& u,
                  const ActionSpec& action, double lambda_bits_per_joule);

/// One CSV per action with the full joint P(u', y | u, a).
void dump_kernel_csv(const SystemModel& model, const std::string& directory);

}  // namespace beamplan
