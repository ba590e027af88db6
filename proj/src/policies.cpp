#include "beamplan/policies.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace beamplan {

FsmPolicy FsmPolicy::build(const SystemModel& model, FsmVariant variant, double power_dbm,
                           int t_dt) {
    const auto& catalog = model.pomdp.catalog;
    const int S = model.cfg.num_sectors;

    FsmPolicy policy;
    policy.variant = variant;
    policy.t_dt = t_dt;
    policy.power_dbm = power_dbm;
    policy.handover = policy.bt_exhaustive = -1;
    policy.dt_for_sector.assign(S, -1);

    for (std::size_t a = 0; a < catalog.size(); ++a) {
        const auto& spec = catalog[a];
        switch (spec.cls) {
            case ActionClass::Handover:
                policy.handover = static_cast<int>(a);
                break;
            case ActionClass::BeamTrain:
                if (static_cast<int>(spec.sectors.size()) == S && spec.power_dbm == power_dbm)
                    policy.bt_exhaustive = static_cast<int>(a);
                break;
            case ActionClass::DataTransmit:
                if (spec.duration == t_dt && spec.power_dbm == power_dbm)
                    policy.dt_for_sector[spec.sectors.front() - 1] = static_cast<int>(a);
                break;
        }
    }
    if (policy.handover < 0 || policy.bt_exhaustive < 0 ||
        std::any_of(policy.dt_for_sector.begin(), policy.dt_for_sector.end(),
                    [](int i) { return i < 0; }))
        throw ValidationError(
            "FSM policy needs an exhaustive BT and per-sector DT at the requested power and "
            "duration; check power_levels and dt_durations");
    return policy;
}

int FsmPolicy::next(const PomdpModel& model, int action, int y) const {
    if (y == model.exit_obs()) return -1;
    const auto& spec = model.catalog[action];
    const bool empty_feedback = y == model.num_obs - 1;  // last non-exit observation
    switch (spec.cls) {
        case ActionClass::Handover:
            return bt_exhaustive;
        case ActionClass::BeamTrain:
            if (empty_feedback) return handover;
            return dt_for_sector[y];  // y < num_sectors names the reported beam
        case ActionClass::DataTransmit: {
            bool ack = !empty_feedback && y == spec.sectors.front() - 1;
            if (ack && variant == FsmVariant::Heuristic) return action;
            return bt_exhaustive;
        }
    }
    return bt_exhaustive;
}

std::vector<int> FsmPolicy::action_set() const {
    std::vector<int> actions{handover, bt_exhaustive};
    actions.insert(actions.end(), dt_for_sector.begin(), dt_for_sector.end());
    return actions;
}

FsmValue evaluate_fsm(const PomdpModel& pomdp, const FsmPolicy& policy,
                      double lambda_bits_per_joule) {
    const int U = pomdp.num_states;

    FsmValue out;
    out.actions = policy.action_set();
    const int nA = static_cast<int>(out.actions.size());
    std::unordered_map<int, int> local;
    for (int i = 0; i < nA; ++i) local[out.actions[i]] = i;

    const int N = U * nA;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N);
    Eigen::VectorXd b(N);

    for (int ai = 0; ai < nA; ++ai) {
        const int a = out.actions[ai];
        const auto& k = pomdp.actions[a];
        for (int u = 0; u < U; ++u) {
            const int row = ai * U + u;
            b(row) = k.reward(u) - lambda_bits_per_joule * k.energy(u);
            for (int y = 0; y < pomdp.num_obs; ++y) {
                double py = k.obs(u, y);
                if (py == 0.0) continue;
                int a_next = policy.next(pomdp, a, y);
                auto it = local.find(a_next);
                if (it == local.end())
                    throw ValidationError("FSM successor action is outside the machine");
                const int col_base = it->second * U;
                for (int u2 = 0; u2 < U; ++u2) {
                    double p = k.trans(u, u2) * py;
                    if (p != 0.0) A(row, col_base + u2) -= p;
                }
            }
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(b);
    double res = (A * x - b).cwiseAbs().maxCoeff();
    double scale = std::max({1.0, b.cwiseAbs().maxCoeff(), x.cwiseAbs().maxCoeff()});
    out.residual = res / scale;
    if (!x.allFinite() || out.residual > 1e-8)
        throw ValidationError(
            "FSM evaluation system is singular or ill-conditioned (non-absorbing model?)");

    out.V.resize(U, nA);
    for (int ai = 0; ai < nA; ++ai) out.V.col(ai) = x.segment(ai * U, U);
    return out;
}

double FsmValue::value(int state, int catalog_action) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i] == catalog_action) return V(state, static_cast<int>(i));
    throw ValidationError("action not evaluated by this FSM");
}

GeniePoint genie_bound(double snr_dt, double pi_b1, double pi_b2, double kappa, double bandwidth,
                       double gamma_snr_per_watt) {
    const double available = 1.0 - pi_b1 * pi_b2;
    const double rate = optimal_throughput(snr_dt, kappa, bandwidth).rate;
    return {available * rate / bandwidth, available * snr_dt / gamma_snr_per_watt};
}

}  // namespace beamplan
