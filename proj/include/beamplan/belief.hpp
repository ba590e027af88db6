#pragma once

#include <Eigen/Dense>

#include "beamplan/model.hpp"

namespace beamplan {

/// Probability over non-absorbing states plus the absorbing exit mass.
struct Belief {
    Eigen::VectorXd p;
    double exit_mass = 0;

    double total() const { return p.sum() + exit_mass; }
    void normalize();
    bool operator==(const Belief& other) const {
        return exit_mass == other.exit_mass && p == other.p;
    }
};

Belief point_mass(int num_states, int state);
Belief exit_belief(int num_states);

/// Point mass on (sector 1, BS 1, both links LOS).
Belief initial_belief(const SystemModel& model);

double l1_distance(const Belief& a, const Belief& b);

/// P(y | belief, action); y may be the exit observation.
double observation_prob(const PomdpModel& model, const Belief& belief, int action, int y);

/// Bayes update.  Throws ImpossibleObservation when the observation has zero
/// probability under the model.
Belief update(const PomdpModel& model, const Belief& belief, int action, int y);

/// One-step state marginal prediction (law of total probability over y).
Belief predict(const PomdpModel& model, const Belief& belief, int action);

}  // namespace beamplan
