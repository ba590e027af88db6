#include "beamplan/perseus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace beamplan {

namespace {

/// Per-action quantities reused across backups within one solve.
struct PlanContext {
    std::vector<Eigen::VectorXd> payoff;        // L(., a) = reward - lambda * energy
    std::vector<std::vector<int>> obs_support;  // observations with nonzero probability
};

PlanContext make_context(const PomdpModel& model, double lambda) {
    PlanContext ctx;
    ctx.payoff.reserve(model.actions.size());
    ctx.obs_support.resize(model.actions.size());
    for (std::size_t a = 0; a < model.actions.size(); ++a) {
        const auto& k = model.actions[a];
        ctx.payoff.push_back(k.reward - lambda * k.energy);
        for (int y = 0; y < model.num_obs; ++y)
            if ((k.obs.col(y).array() != 0.0).any()) ctx.obs_support[a].push_back(y);
    }
    return ctx;
}

BackupResult backup_impl(const PomdpModel& model, const PlanContext& ctx, const Belief& belief,
                         const AlphaVectorSet& set) {
    const int U = model.num_states;
    BackupResult best;
    best.value = -std::numeric_limits<double>::infinity();

    for (std::size_t a = 0; a < model.actions.size(); ++a) {
        const auto& k = model.actions[a];
        Eigen::VectorXd alpha = ctx.payoff[a];
        for (int y : ctx.obs_support[a]) {
            // unnormalized one-step updated belief under (a, y)
            Eigen::VectorXd weighted = belief.p.cwiseProduct(k.obs.col(y));
            Eigen::VectorXd next = k.trans.leftCols(U).transpose() * weighted;
            int pick = 0;
            double pick_value = -std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < set.vectors.size(); ++q) {
                double v = next.dot(set.vectors[q].v);
                if (v > pick_value) {
                    pick_value = v;
                    pick = static_cast<int>(q);
                }
            }
            // expected continuation: sum_y obs(u,y) * (trans * alpha*_y)(u)
            Eigen::VectorXd cont = k.trans.leftCols(U) * set.vectors[pick].v;
            alpha += k.obs.col(y).cwiseProduct(cont);
        }
        double value = belief.p.dot(alpha);
        if (value > best.value) {
            best.value = value;
            best.alpha = {std::move(alpha), static_cast<int>(a)};
        }
    }
    return best;
}

}  // namespace

double value_at(const AlphaVectorSet& set, const Belief& belief) {
    return set.vectors[best_vector(set, belief)].v.dot(belief.p);
}

int best_vector(const AlphaVectorSet& set, const Belief& belief) {
    if (set.vectors.empty()) throw ValidationError("empty alpha-vector set");
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < set.vectors.size(); ++q) {
        double v = set.vectors[q].v.dot(belief.p);
        if (v > best_value) {
            best_value = v;
            best = static_cast<int>(q);
        }
    }
    return best;
}

int extract_action(const AlphaVectorSet& set, const Belief& belief) {
    return set.vectors[best_vector(set, belief)].action;
}

BackupResult backup(const PomdpModel& model, const Belief& belief, const AlphaVectorSet& set,
                    double lambda) {
    auto ctx = make_context(model, lambda);
    return backup_impl(model, ctx, belief, set);
}

namespace {

SweepResult sweep_impl(const PomdpModel& model, const PlanContext& ctx,
                       const std::vector<Belief>& beliefs, const AlphaVectorSet& set,
                       std::mt19937_64& rng) {
    const int n = static_cast<int>(beliefs.size());
    Eigen::VectorXd old_values(n);
    std::vector<int> old_maximizer(n);
    for (int i = 0; i < n; ++i) {
        old_maximizer[i] = best_vector(set, beliefs[i]);
        old_values(i) = set.vectors[old_maximizer[i]].v.dot(beliefs[i].p);
    }

    SweepResult result;
    result.values = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
    std::vector<int> pending(n);
    for (int i = 0; i < n; ++i) pending[i] = i;
    std::vector<char> carried(set.vectors.size(), 0);  // old vectors already kept

    while (!pending.empty()) {
        std::uniform_int_distribution<std::size_t> pickdist(0, pending.size() - 1);
        int i = pending[pickdist(rng)];
        BackupResult b = backup_impl(model, ctx, beliefs[i], set);
        ++result.backups;

        const AlphaVector* used = nullptr;
        if (b.value > old_values(i)) {
            result.set.vectors.push_back(std::move(b.alpha));
            used = &result.set.vectors.back();
        } else {
            int j = old_maximizer[i];
            if (!carried[j]) {
                carried[j] = 1;
                result.set.vectors.push_back(set.vectors[j]);
            }
            used = &set.vectors[j];
        }

        for (int m = 0; m < n; ++m)
            result.values(m) = std::max(result.values(m), used->v.dot(beliefs[m].p));
        std::erase_if(pending, [&](int m) { return result.values(m) >= old_values(m); });
    }
    return result;
}

}  // namespace

SweepResult perseus_sweep(const PomdpModel& model, const std::vector<Belief>& beliefs,
                          const AlphaVectorSet& set, double lambda, std::mt19937_64& rng) {
    auto ctx = make_context(model, lambda);
    return sweep_impl(model, ctx, beliefs, set, rng);
}

SolveResult solve(const PomdpModel& model, const std::vector<Belief>& beliefs, double lambda,
                  const SolveOptions& options) {
    if (beliefs.empty()) throw ValidationError("solve: empty belief set");
    if (options.tol <= 0) throw ValidationError("solve: tolerance must be positive");
    auto ctx = make_context(model, lambda);
    auto rng = make_rng(options.seed, 0x5eed);

    SolveResult result;
    result.set.vectors.push_back({Eigen::VectorXd::Zero(model.num_states), 0});

    Eigen::VectorXd values = Eigen::VectorXd::Zero(beliefs.size());
    for (std::size_t i = 0; i < beliefs.size(); ++i)
        values(i) = value_at(result.set, beliefs[i]);
    if (options.record_trace) result.value_trace.push_back(values);

    for (int iter = 1; iter <= options.max_iters; ++iter) {
        SweepResult sweep = sweep_impl(model, ctx, beliefs, result.set, rng);
        double delta = (sweep.values - values).maxCoeff();
        values = sweep.values;
        result.set = std::move(sweep.set);
        result.set.iteration = iter;
        result.iterations = iter;
        if (options.record_trace) result.value_trace.push_back(values);
        if (delta < options.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double default_tolerance(const SystemModel& model) {
    double best_snr = 0;
    for (double p : model.cfg.power_levels)
        best_snr = std::max(best_snr, model.budget.gamma * dbm_to_watt(p));
    double rate = optimal_throughput(best_snr, model.cfg.pilot_fraction, model.cfg.bandwidth).rate;
    return 1e-4 * rate * model.cfg.slot_duration;
}

std::vector<Belief> expand_beliefs(const PomdpModel& model, const std::vector<Belief>& seed_set,
                                   int target_size, std::mt19937_64& rng) {
    if (seed_set.empty()) throw ValidationError("expand_beliefs: empty seed set");
    std::vector<Belief> beliefs = seed_set;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int num_actions = static_cast<int>(model.actions.size());
    const int exit_y = model.exit_obs();

    auto sample_obs = [&](const Belief& b, int a) {
        double u = unif(rng);
        double acc = 0.0;
        for (int y = 0; y < model.num_obs; ++y) {
            acc += observation_prob(model, b, a, y);
            if (u < acc) return y;
        }
        return exit_y;
    };

    while (static_cast<int>(beliefs.size()) < target_size) {
        const std::size_t snapshot = beliefs.size();
        int added = 0;
        for (std::size_t i = 0; i < snapshot && static_cast<int>(beliefs.size()) < target_size;
             ++i) {
            Belief best_candidate;
            double best_dist = 0.0;
            for (int a = 0; a < num_actions; ++a) {
                int y = sample_obs(beliefs[i], a);
                Belief candidate = y == exit_y ? exit_belief(model.num_states)
                                               : update(model, beliefs[i], a, y);
                double dist = std::numeric_limits<double>::infinity();
                for (const auto& existing : beliefs)
                    dist = std::min(dist, l1_distance(candidate, existing));
                if (dist > best_dist) {
                    best_dist = dist;
                    best_candidate = std::move(candidate);
                }
            }
            if (best_dist > 1e-12) {
                beliefs.push_back(std::move(best_candidate));
                ++added;
            }
        }
        if (added == 0) break;  // only already-covered beliefs are reachable this pass
    }
    return beliefs;
}

namespace {

nlohmann::json action_to_json(const ActionSpec& a) {
    return {{"class", to_string(a.cls)},
            {"sectors", a.sectors},
            {"target_snr", a.target_snr},
            {"duration", a.duration},
            {"power_dbm", a.power_dbm}};
}

ActionSpec action_from_json(const nlohmann::json& j) {
    ActionSpec a;
    std::string cls = j.at("class").get<std::string>();
    if (cls == "ho")
        a.cls = ActionClass::Handover;
    else if (cls == "bt")
        a.cls = ActionClass::BeamTrain;
    else if (cls == "dt")
        a.cls = ActionClass::DataTransmit;
    else
        throw ConfigError("policy file: unknown action class '" + cls + "'");
    a.sectors = j.at("sectors").get<std::vector<int>>();
    a.target_snr = j.at("target_snr").get<double>();
    a.duration = j.at("duration").get<int>();
    a.power_dbm = j.at("power_dbm").get<double>();
    return a;
}

}  // namespace

void save_policy(const std::string& path, const AlphaVectorSet& set, const SystemModel& model,
                 double lambda_cfg, bool converged) {
    nlohmann::json j;
    j["format"] = "beamplan-policy-v1";
    j["config_hash"] = std::to_string(model.cfg.hash());
    j["seed"] = model.cfg.seed;
    j["lambda"] = lambda_cfg;
    j["iteration"] = set.iteration;
    j["converged"] = converged;
    j["states"] = std::vector<std::string>(model.pomdp.state_labels.begin(),
                                           model.pomdp.state_labels.end() - 1);
    nlohmann::json vectors = nlohmann::json::array();
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& alpha : set.vectors) {
        vectors.push_back(std::vector<double>(alpha.v.data(), alpha.v.data() + alpha.v.size()));
        actions.push_back(action_to_json(model.pomdp.catalog[alpha.action]));
    }
    j["vectors"] = std::move(vectors);
    j["actions"] = std::move(actions);

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write policy file '" + path + "'");
    out << j.dump(1) << "\n";
}

PolicyFile load_policy(const std::string& path, const PomdpModel& model) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open policy file '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);

    PolicyFile policy;
    policy.lambda = j.at("lambda").get<double>();
    policy.config_hash = std::stoull(j.at("config_hash").get<std::string>());
    policy.seed = j.value("seed", 0ull);
    policy.converged = j.value("converged", true);
    policy.set.iteration = j.at("iteration").get<int>();

    const auto& vectors = j.at("vectors");
    const auto& actions = j.at("actions");
    if (vectors.size() != actions.size())
        throw ConfigError("policy file: vectors/actions size mismatch");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto values = vectors[i].get<std::vector<double>>();
        if (static_cast<int>(values.size()) != model.num_states)
            throw ConfigError("policy file: vector length does not match the model");
        ActionSpec spec = action_from_json(actions[i]);
        auto it = std::find(model.catalog.begin(), model.catalog.end(), spec);
        if (it == model.catalog.end())
            throw ConfigError("policy file: action '" + spec.label() +
                              "' is not in the model catalog");
        AlphaVector alpha;
        alpha.v = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
        alpha.action = static_cast<int>(it - model.catalog.begin());
        policy.set.vectors.push_back(std::move(alpha));
    }
    return policy;
}

}  // namespace beamplan
