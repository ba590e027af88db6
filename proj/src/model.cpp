#include "beamplan/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace beamplan {

std::string to_string(ActionClass cls) {
    switch (cls) {
        case ActionClass::Handover: return "ho";
        case ActionClass::BeamTrain: return "bt";
        case ActionClass::DataTransmit: return "dt";
    }
    return "?";
}

namespace {

std::string fmt_power(double dbm) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", dbm);
    return buf;
}

}  // namespace

std::string ActionSpec::label() const {
    switch (cls) {
        case ActionClass::Handover: return "ho";
        case ActionClass::BeamTrain:
            return "bt_s" + std::to_string(sectors.front()) + "-" + std::to_string(sectors.back()) +
                   "_p" + fmt_power(power_dbm);
        case ActionClass::DataTransmit:
            return "dt_s" + std::to_string(sectors.front()) + "_t" + std::to_string(duration) +
                   "_p" + fmt_power(power_dbm);
    }
    return "?";
}

std::string StateSpace::label(int idx) const {
    if (idx == size()) return "exit";
    Fields f = fields(idx);
    return "s" + std::to_string(f.sector) + "_bs" + std::to_string(f.bs) + "_b" +
           std::to_string(f.b1) + std::to_string(f.b2);
}

std::vector<ActionSpec> build_catalog(const ScenarioConfig& cfg, const LinkBudget& budget) {
    std::vector<ActionSpec> catalog;
    const int S = cfg.num_sectors;

    ActionSpec ho;
    ho.cls = ActionClass::Handover;
    ho.target_snr = 0.0;
    ho.duration = cfg.handover_slots;
    catalog.push_back(ho);

    std::vector<int> all_sectors(S);
    std::iota(all_sectors.begin(), all_sectors.end(), 1);
    for (double p : cfg.power_levels) {
        ActionSpec bt;
        bt.cls = ActionClass::BeamTrain;
        bt.sectors = all_sectors;
        bt.target_snr = budget.gamma * dbm_to_watt(p);
        bt.duration = S + 1;
        bt.power_dbm = p;
        catalog.push_back(bt);
    }

    // contiguous scan windows centered on each sector, deduplicated
    const int width = std::min(3, S);
    if (width < S) {
        std::vector<int> starts;
        for (int s = 1; s <= S; ++s) {
            int lo = std::clamp(s - 1, 1, S - width + 1);
            if (starts.empty() || starts.back() != lo) starts.push_back(lo);
        }
        for (int lo : starts) {
            for (double p : cfg.power_levels) {
                ActionSpec bt;
                bt.cls = ActionClass::BeamTrain;
                bt.sectors.resize(width);
                std::iota(bt.sectors.begin(), bt.sectors.end(), lo);
                bt.target_snr = budget.gamma * dbm_to_watt(p);
                bt.duration = width + 1;
                bt.power_dbm = p;
                catalog.push_back(bt);
            }
        }
    }

    for (int s = 1; s <= S; ++s) {
        for (int t : cfg.dt_durations) {
            for (double p : cfg.power_levels) {
                ActionSpec dt;
                dt.cls = ActionClass::DataTransmit;
                dt.sectors = {s};
                dt.target_snr = budget.gamma * dbm_to_watt(p);
                dt.duration = t;
                dt.power_dbm = p;
                catalog.push_back(dt);
            }
        }
    }
    return catalog;
}

double detection_prob(double snr_rx, double eta, double pilot_symbols) {
    return std::exp(-eta / (1.0 + pilot_symbols * snr_rx));
}

double effective_threshold(double base_eta, double pilot_symbols, double sidelobe_ratio,
                           double target_snr) {
    return base_eta * (1.0 + pilot_symbols * sidelobe_ratio * target_snr);
}

std::vector<double> bt_feedback_dist(const std::vector<double>& means, double eta) {
    const int n = static_cast<int>(means.size());
    if (n == 0) throw ValidationError("bt_feedback_dist: empty scan set");
    std::vector<double> rates(n);
    for (int i = 0; i < n; ++i) rates[i] = 1.0 / means[i];

    std::vector<double> out(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        std::vector<double> others;
        others.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(rates[j]);
        // P(z_i > eta, z_j < z_i for all j) by inclusion-exclusion over subsets
        double p = 0.0;
        const unsigned subsets = 1u << others.size();
        for (unsigned mask = 0; mask < subsets; ++mask) {
            double rate_sum = rates[i];
            for (std::size_t b = 0; b < others.size(); ++b)
                if (mask & (1u << b)) rate_sum += others[b];
            double term = rates[i] / rate_sum * std::exp(-rate_sum * eta);
            p += (std::popcount(mask) % 2 == 0) ? term : -term;
        }
        out[i] = p;
    }
    double all_below = 1.0;
    for (int j = 0; j < n; ++j) all_below *= 1.0 - std::exp(-eta * rates[j]);
    out[n] = all_below;
    return out;
}

std::vector<double> bt_scan_means(const ScenarioConfig& cfg, const StateSpace::Fields& u,
                                  const ActionSpec& action) {
    const double L = cfg.symbols_per_slot;
    const int b_serving = u.bs == 1 ? u.b1 : u.b2;
    std::vector<double> means;
    means.reserve(action.sectors.size());
    for (int scan : action.sectors) {
        bool aligned = (scan == u.sector) && (b_serving == 1);
        double gain = aligned ? 1.0 : cfg.sidelobe_ratio;
        means.push_back(1.0 + L * gain * action.target_snr);
    }
    return means;
}

double dt_pilot_mean(const ScenarioConfig& cfg, const StateSpace::Fields& u,
                     const ActionSpec& action) {
    const double pilot = cfg.pilot_fraction * cfg.symbols_per_slot;
    const int b_serving = u.bs == 1 ? u.b1 : u.b2;
    bool aligned = (action.sectors.front() == u.sector) && (b_serving == 1);
    double gain = aligned ? 1.0 : cfg.sidelobe_ratio;
    return 1.0 + pilot * gain * action.target_snr;
}

namespace {

BlockageMatrix mat2_mul(const BlockageMatrix& a, const BlockageMatrix& b) {
    BlockageMatrix r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

}  // namespace

double action_energy(const ScenarioConfig& cfg, const LinkBudget& budget,
                     const ActionSpec& action) {
    return cfg.slot_duration / budget.gamma * action.target_snr * (action.duration - 1);
}

double action_reward(const SystemModel& model, const StateSpace::Fields& u,
                     const ActionSpec& action) {
    if (action.cls != ActionClass::DataTransmit) return 0.0;
    const auto& cfg = model.cfg;
    const int target = action.sectors.front();
    const int b_start = u.bs == 1 ? u.b1 : u.b2;
    const BlockageChain& chain = model.serving_chain(u.bs);
    const double rate = optimal_throughput(action.target_snr, cfg.pilot_fraction, cfg.bandwidth).rate;

    Eigen::MatrixXd mob = Eigen::MatrixXd::Identity(model.mobility.P.rows(), model.mobility.P.cols());
    BlockageMatrix blk = two_state_power(chain, 0);
    BlockageMatrix step = two_state_power(chain, 1);
    double acc = 0.0;
    for (int t = 0; t <= action.duration - 2; ++t) {
        if (t > 0) {
            mob = mob * model.mobility.P;
            blk = mat2_mul(blk, step);
        }
        acc += mob(u.sector - 1, target - 1) * blk[b_start][1];
    }
    return rate * cfg.slot_duration * acc;
}

double lagrangian(const SystemModel& model, const StateSpace::Fields& u,
                  const ActionSpec& action, double lambda_bits_per_joule) {
    return action_reward(model, u, action) -
           lambda_bits_per_joule * action_energy(model.cfg, model.budget, action);
}

namespace {

PomdpModel build_pomdp(const ScenarioConfig& cfg, const SectorTable& table,
                       const LinkBudget& budget, const MobilityChain& mobility,
                       const BlockageChain& blk1, const BlockageChain& blk2) {
    const int S = cfg.num_sectors;
    StateSpace space{S};
    const int U = space.size();

    PomdpModel model;
    model.num_states = U;
    model.num_obs = S + 1;
    model.catalog = build_catalog(cfg, budget);
    model.state_labels.reserve(U + 1);
    for (int u = 0; u <= U; ++u) model.state_labels.push_back(space.label(u));
    for (int s = 1; s <= S; ++s) model.obs_labels.push_back("s" + std::to_string(s));
    model.obs_labels.push_back("none");
    model.obs_labels.push_back("exit");

    int max_duration = 1;
    for (const auto& a : model.catalog) max_duration = std::max(max_duration, a.duration);

    std::vector<Eigen::MatrixXd> mob_pow(max_duration + 1);
    mob_pow[0] = Eigen::MatrixXd::Identity(S + 1, S + 1);
    for (int t = 1; t <= max_duration; ++t) mob_pow[t] = mob_pow[t - 1] * mobility.P;
    std::vector<BlockageMatrix> b1_pow(max_duration + 1), b2_pow(max_duration + 1);
    for (int t = 0; t <= max_duration; ++t) {
        b1_pow[t] = two_state_power(blk1, t);
        b2_pow[t] = two_state_power(blk2, t);
    }

    model.actions.reserve(model.catalog.size());
    for (const auto& a : model.catalog) {
        ActionKernel k;
        k.duration = a.duration;
        k.trans = Eigen::MatrixXd::Zero(U, U + 1);
        k.obs = Eigen::MatrixXd::Zero(U, S + 1);
        k.reward = Eigen::VectorXd::Zero(U);
        k.energy = Eigen::VectorXd::Constant(U, action_energy(cfg, budget, a));

        const int T = a.duration;
        const auto& M = mob_pow[T];
        const auto& B1 = b1_pow[T];
        const auto& B2 = b2_pow[T];
        const double dt_rate =
            a.cls == ActionClass::DataTransmit
                ? optimal_throughput(a.target_snr, cfg.pilot_fraction, cfg.bandwidth).rate
                : 0.0;

        for (int u = 0; u < U; ++u) {
            const auto f = space.fields(u);
            const int bs_next = a.cls == ActionClass::Handover ? 3 - f.bs : f.bs;
            for (int z2 = 1; z2 <= S; ++z2) {
                double pz = M(f.sector - 1, z2 - 1);
                if (pz == 0.0) continue;
                for (int b1n = 0; b1n < 2; ++b1n)
                    for (int b2n = 0; b2n < 2; ++b2n)
                        k.trans(u, space.index(z2, bs_next, b1n, b2n)) =
                            pz * B1[f.b1][b1n] * B2[f.b2][b2n];
            }
            k.trans(u, U) = M(f.sector - 1, S);

            switch (a.cls) {
                case ActionClass::Handover:
                    k.obs(u, S) = 1.0;
                    break;
                case ActionClass::BeamTrain: {
                    auto means = bt_scan_means(cfg, f, a);
                    double eta = effective_threshold(cfg.bt_threshold, cfg.symbols_per_slot,
                                                     cfg.sidelobe_ratio, a.target_snr);
                    auto dist = bt_feedback_dist(means, eta);
                    for (std::size_t i = 0; i < a.sectors.size(); ++i)
                        k.obs(u, a.sectors[i] - 1) = dist[i];
                    k.obs(u, S) = dist.back();
                    break;
                }
                case ActionClass::DataTransmit: {
                    double eta = effective_threshold(cfg.dt_threshold,
                                                     cfg.pilot_fraction * cfg.symbols_per_slot,
                                                     cfg.sidelobe_ratio, a.target_snr);
                    double p_ack = std::exp(-eta / dt_pilot_mean(cfg, f, a));
                    k.obs(u, a.sectors.front() - 1) = p_ack;
                    k.obs(u, S) = 1.0 - p_ack;

                    const int b_start = f.bs == 1 ? f.b1 : f.b2;
                    const auto& bp = f.bs == 1 ? b1_pow : b2_pow;
                    double acc = 0.0;
                    for (int t = 0; t <= T - 2; ++t)
                        acc += mob_pow[t](f.sector - 1, a.sectors.front() - 1) * bp[t][b_start][1];
                    k.reward(u) = dt_rate * cfg.slot_duration * acc;
                    break;
                }
            }
        }
        model.actions.push_back(std::move(k));
    }

    for (std::size_t a = 0; a < model.catalog.size(); ++a)
        model.action_labels.push_back(model.catalog[a].label());
    return model;
}

}  // namespace

SystemModel build_system(const ScenarioConfig& cfg, int num_trajectories) {
    cfg.validate();
    SystemModel m;
    m.cfg = cfg;
    m.table = build_sector_table(cfg);
    m.budget = build_link_budget(cfg, m.table);
    m.mobility = estimate_mobility(cfg, m.table, num_trajectories);
    m.blockage1 = {cfg.blockage_p10, cfg.blockage_p01};
    m.blockage2 = {cfg.blockage_p10, cfg.blockage_p01};
    m.pomdp = build_pomdp(cfg, m.table, m.budget, m.mobility, m.blockage1, m.blockage2);
    return m;
}

double PomdpModel::joint(int a, int u, int u_next, int y) const {
    const auto& k = actions[a];
    if (u_next == exit_state()) return y == exit_obs() ? k.trans(u, num_states) : 0.0;
    if (y == exit_obs()) return 0.0;
    return k.trans(u, u_next) * k.obs(u, y);
}

double PomdpModel::max_normalization_error() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < actions.size(); ++a) {
        const auto& k = actions[a];
        for (int u = 0; u < num_states; ++u) {
            double sum = k.trans.row(u).head(num_states).sum() * k.obs.row(u).sum() +
                         k.trans(u, num_states);
            worst = std::max(worst, std::abs(1.0 - sum));
        }
    }
    return worst;
}

void dump_kernel_csv(const SystemModel& model, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const auto& pomdp = model.pomdp;
    const int U = pomdp.num_states;
    char buf[64];
    for (std::size_t a = 0; a < pomdp.actions.size(); ++a) {
        std::snprintf(buf, sizeof(buf), "kernel_a%03zu.csv", a);
        std::ofstream out(fs::path(directory) / buf);
        out << "# config_hash=" << model.cfg.hash() << " seed=" << model.cfg.seed
            << " action=" << pomdp.action_labels[a] << "\n";
        out << "state";
        for (int u2 = 0; u2 <= U; ++u2)
            for (int y = 0; y <= pomdp.num_obs; ++y)
                out << "," << pomdp.state_labels[u2] << "|" << pomdp.obs_labels[y];
        out << "\n";
        for (int u = 0; u < U; ++u) {
            out << pomdp.state_labels[u];
            for (int u2 = 0; u2 <= U; ++u2) {
                for (int y = 0; y <= pomdp.num_obs; ++y) {
                    std::snprintf(buf, sizeof(buf), "%.17g", pomdp.joint(a, u, u2, y));
                    out << "," << buf;
                }
            }
            out << "\n";
        }
    }
}

}  // namespace beamplan
