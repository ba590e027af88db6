#pragma once

#include <vector>

#include <Eigen/Dense>

#include "beamplan/model.hpp"

namespace beamplan {

enum class FsmVariant { Heuristic, Baseline };

/// Reactive policy driven only by the last action and its feedback.
///
/// Both variants: BT with a reported beam starts DT there; BT with empty
/// feedback hands over; DT with NACK retrains exhaustively; HO retrains
/// exhaustively.  On DT ACK the heuristic keeps transmitting while the
/// baseline retrains (periodic beam training).
struct FsmPolicy {
    FsmVariant variant = FsmVariant::Heuristic;
    int t_dt = 10;
    double power_dbm = 30;
    int handover = 0;           // catalog indices
    int bt_exhaustive = 0;
    std::vector<int> dt_for_sector;  // per sector, 1-based offset by one

    static FsmPolicy build(const SystemModel& model, FsmVariant variant, double power_dbm,
                           int t_dt);

    int initial() const { return bt_exhaustive; }

    /// Next catalog action after observing y; -1 once the exit signal arrives.
    int next(const PomdpModel& model, int action, int y) const;

    /// The catalog actions reachable by the machine.
    std::vector<int> action_set() const;
};

/// Exact value of an FSM policy from every (state, action) pair, by direct
/// linear solve of the absorbing evaluation equations.
struct FsmValue {
    std::vector<int> actions;  // catalog indices, aligned with columns of V
    Eigen::MatrixXd V;         // num_states x actions.size()
    double residual = 0;

    double value(int state, int catalog_action) const;
};

FsmValue evaluate_fsm(const PomdpModel& model, const FsmPolicy& policy,
                      double lambda_bits_per_joule);

struct GeniePoint {
    double spectral_eff = 0;  // bps/Hz
    double power_w = 0;
};

/// Closed-form upper bound: always-DT with perfect state knowledge, paying
/// power only when at least one link has LOS.
GeniePoint genie_bound(double snr_dt, double pi_b1, double pi_b2, double kappa, double bandwidth,
                       double gamma_snr_per_watt);

}  // namespace beamplan
