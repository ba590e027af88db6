#include "beamplan/belief.hpp"

#include <cmath>

namespace beamplan {

void Belief::normalize() {
    double t = total();
    if (t <= 0.0) throw ValidationError("belief with zero total mass");
    p /= t;
    exit_mass /= t;
}

Belief point_mass(int num_states, int state) {
    Belief b;
    b.p = Eigen::VectorXd::Zero(num_states);
    b.p(state) = 1.0;
    return b;
}

Belief exit_belief(int num_states) {
    Belief b;
    b.p = Eigen::VectorXd::Zero(num_states);
    b.exit_mass = 1.0;
    return b;
}

Belief initial_belief(const SystemModel& model) {
    StateSpace space{model.cfg.num_sectors};
    return point_mass(model.pomdp.num_states, space.index(1, 1, 1, 1));
}

double l1_distance(const Belief& a, const Belief& b) {
    return (a.p - b.p).cwiseAbs().sum() + std::abs(a.exit_mass - b.exit_mass);
}

double observation_prob(const PomdpModel& model, const Belief& belief, int action, int y) {
    const auto& k = model.actions[action];
    const int U = model.num_states;
    if (y == model.exit_obs()) {
        // the exit signal occurs exactly when the successor is the exit state
        return belief.exit_mass + belief.p.dot(k.trans.col(U));
    }
    double surviving = 0.0;
    for (int u = 0; u < U; ++u)
        surviving += belief.p(u) * (1.0 - k.trans(u, U)) * k.obs(u, y);
    return surviving;
}

Belief update(const PomdpModel& model, const Belief& belief, int action, int y) {
    const int U = model.num_states;
    if (y == model.exit_obs()) {
        double denom = observation_prob(model, belief, action, y);
        if (denom <= 0.0)
            throw ImpossibleObservation("exit observed but unreachable under action " +
                                        std::to_string(action));
        return exit_belief(U);
    }
    const auto& k = model.actions[action];
    Eigen::VectorXd weighted = belief.p.cwiseProduct(k.obs.col(y));
    Belief next;
    next.p = k.trans.leftCols(U).transpose() * weighted;
    next.exit_mass = 0.0;
    double denom = next.p.sum();
    if (denom <= 0.0)
        throw ImpossibleObservation("observation " + std::to_string(y) +
                                    " has zero probability under action " + std::to_string(action));
    next.p /= denom;
    return next;
}

Belief predict(const PomdpModel& model, const Belief& belief, int action) {
    const int U = model.num_states;
    const auto& k = model.actions[action];
    Belief next;
    next.p = k.trans.leftCols(U).transpose() * belief.p;
    next.exit_mass = belief.exit_mass + belief.p.dot(k.trans.col(U));
    return next;
}

}  // namespace beamplan
