#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "beamplan/belief.hpp"
#include "beamplan/model.hpp"

namespace beamplan {

/// Value hyperplane over non-absorbing states (the absorbing value is zero)
/// with the action that generated it.
struct AlphaVector {
    Eigen::VectorXd v;
    int action = 0;
};

struct AlphaVectorSet {
    std::vector<AlphaVector> vectors;
    int iteration = 0;
};

double value_at(const AlphaVectorSet& set, const Belief& belief);
int best_vector(const AlphaVectorSet& set, const Belief& belief);
int extract_action(const AlphaVectorSet& set, const Belief& belief);

struct BackupResult {
    AlphaVector alpha;
    double value = 0;
};

/// One-step lookahead backup at a single belief: the maximizing hyperplane
/// over all actions and the backed-up value.  Ties break by catalog order.
BackupResult backup(const PomdpModel& model, const Belief& belief, const AlphaVectorSet& set,
                    double lambda_bits_per_joule);

struct SweepResult {
    AlphaVectorSet set;
    Eigen::VectorXd values;  // per belief in the working set
    int backups = 0;
};

/// Randomized point-based backup sweep: improves every belief in the working
/// set, sampling from the not-yet-improved subset until it empties.
SweepResult perseus_sweep(const PomdpModel& model, const std::vector<Belief>& beliefs,
                          const AlphaVectorSet& set, double lambda_bits_per_joule,
                          std::mt19937_64& rng);

struct SolveOptions {
    double tol = 1e-4;
    int max_iters = 500;
    std::uint64_t seed = 1;
    bool record_trace = true;
};

struct SolveResult {
    AlphaVectorSet set;
    bool converged = false;
    int iterations = 0;
    std::vector<Eigen::VectorXd> value_trace;  // per-iteration values at the belief set
};

SolveResult solve(const PomdpModel& model, const std::vector<Belief>& beliefs,
                  double lambda_bits_per_joule, const SolveOptions& options);

/// Default convergence tolerance: 1e-4 of the best single-slot payload.
double default_tolerance(const SystemModel& model);

/// Belief-set expansion by stochastic one-step simulation: per pass, each
/// belief contributes the candidate successor farthest (L1) from the set.
std::vector<Belief> expand_beliefs(const PomdpModel& model, const std::vector<Belief>& seed_set,
                                   int target_size, std::mt19937_64& rng);

struct PolicyFile {
    AlphaVectorSet set;
    double lambda = 0;  // config units (bits per microjoule)
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    bool converged = false;
};

void save_policy(const std::string& path, const AlphaVectorSet& set, const SystemModel& model,
                 double lambda_cfg, bool converged);
PolicyFile load_policy(const std::string& path, const PomdpModel& model);

}  // namespace beamplan
