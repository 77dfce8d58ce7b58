// uavgan - cooperative generative channel modeling for UAV mmWave networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/completion.hpp"
#include "uavgan/config.hpp"
#include "uavgan/environment.hpp"
#include "uavgan/graph.hpp"
#include "uavgan/histogram.hpp"
#include "uavgan/learning.hpp"
#include "uavgan/spread.hpp"
#include "uavgan/topology.hpp"

namespace uavgan {

struct InfeasibleScenario : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything a run needs: the environment, the codebook, the service strips
/// with one hovering UAV and one collected dataset each.
struct Scenario {
    AntennaConfig antenna;
    Codebook codebook;
    EnvironmentModel env;
    BinGrid grid;
    std::vector<UavNode> nodes;
    std::vector<CollectionWindow> windows;
    std::vector<Dataset> datasets;

    double strip_width = 100.0;

    int region_of(double ue_x) const {
        const int n = static_cast<int>(nodes.size());
        int r = static_cast<int>(ue_x / strip_width);
        if (r < 0) r = 0;
        if (r >= n) r = n - 1;
        return r;
    }
};

/// Split the RB budget into per-node out-degrees: floor share everywhere,
/// remainder to the lowest ids.
inline std::vector<int> out_budgets_for(int uav_count, int rb_budget) {
    if (uav_count < 1 || rb_budget < uav_count)
        throw ContractViolation("out_budgets_for: need rb_budget >= uav_count");
    std::vector<int> out(static_cast<std::size_t>(uav_count), rb_budget / uav_count);
    int rem = rb_budget % uav_count;
    for (int i = 0; i < rem; ++i) ++out[static_cast<std::size_t>(i)];
    for (auto& o : out) o = std::min(o, uav_count - 1);  // no self-loops
    return out;
}

/// Build the disjoint-strip scenario: the service area splits into
/// `uav_count` strips along x, each UAV hovers over its strip center and
/// collects its dataset from UEs inside the strip.
inline Scenario build_scenario(const ExperimentConfig& cfg, int uav_count, int rb_budget) {
    Scenario sc;
    sc.antenna = cfg.antenna();
    sc.codebook = cfg.codebook();
    sc.env = cfg.environment();
    sc.grid = cfg.bin_grid();
    sc.strip_width = cfg.region_x_m / uav_count;

    const auto budgets = out_budgets_for(uav_count, rb_budget);
    for (int i = 0; i < uav_count; ++i) {
        // hover points differ per strip: each region has its own geometry, so
        // one strip's beam map does not transfer to another
        Rng hover_rng(derive_seed(cfg.seed, "hover", static_cast<std::uint64_t>(i)));
        UavNode n;
        n.id = i;
        n.position = {sc.strip_width * (i + hover_rng.uniform(0.25, 0.75)),
                      cfg.region_y_m * hover_rng.uniform(0.3, 0.7),
                      cfg.uav_altitude_m};
        n.dataset_size = cfg.dataset_size;
        n.max_power_w = cfg.max_power_w();
        n.out_budget = budgets[static_cast<std::size_t>(i)];
        sc.nodes.push_back(n);

        CollectionWindow w;
        w.uav_box = {n.position, n.position};
        w.ue_box = {{sc.strip_width * i, 0.0, 0.0},
                    {sc.strip_width * (i + 1), cfg.region_y_m, 0.0}};
        w.t_begin = 0.0;
        w.t_end = cfg.time_window_s;
        sc.windows.push_back(w);

        sc.datasets.push_back(collect_dataset(
            sc.env, sc.codebook, sc.antenna, w, i, cfg.dataset_size,
            derive_seed(cfg.seed, "dataset", static_cast<std::uint64_t>(i))));
    }
    return sc;
}

/// Completion parameters assembled from the config and a formed topology.
inline CompletionParams completion_params_for(const ExperimentConfig& cfg,
                                              const UavGraph& graph, int rb_budget) {
    const PathProfile prof = path_profile(graph);
    CompletionParams p;
    p.share_ratio = cfg.share_ratio;
    p.disc_error = cfg.disc_error;
    p.in_degree = prof.homogeneous_in_degree;
    p.l_max = prof.l_max;
    p.l_loop_min = prof.l_loop_min;
    p.confidence = cfg.confidence;
    p.tx_time = cfg.tx_time;
    p.train_time = cfg.train_time;
    p.sample_scalars = cfg.sample_scalars;
    p.bits_per_scalar = cfg.bits_per_scalar;
    p.dataset_size = cfg.dataset_size;
    p.rb_budget = rb_budget;
    p.gamma = cfg.gamma_schedule();
    p.iteration_cap = cfg.iteration_cap;
    return p;
}

// ---------------------------------------------------------------------------
// MAP beam selection and the downlink-rate evaluation
// ---------------------------------------------------------------------------

struct BeamChoice {
    int condition = 1;
    enum class Source { kNearBin, kGlobalFallback } source = Source::kNearBin;
};

/// Posterior beam pick: the condition maximizing the model's expected |gain|^2
/// near the queried (x, y, t) bin. The conditioning pool is the queried UAV
/// bin with the UE bins within `neighborhood` (time marginalized); radius 0
/// means the exact bin only. An empty pool falls back to the model-wide
/// per-condition ranking with a diagnostic. Ties break to the lowest index.
inline BeamChoice map_beam_select(const GenerativeModel& model, const BinGrid& grid,
                                  const Vec3& uav_pos, const Vec3& ue_pos, double t,
                                  int conditions, int neighborhood = 1) {
    ChannelSample probe;
    probe.uav_pos = uav_pos;
    probe.ue_pos = ue_pos;
    probe.time = t;
    probe.condition_idx = 1;
    const BinKey q = grid.key_of(probe);

    struct Acc {
        double wsum = 0.0, psum = 0.0;
    };
    std::vector<Acc> near(static_cast<std::size_t>(conditions) + 1);
    std::vector<Acc> global(static_cast<std::size_t>(conditions) + 1);

    for (const auto& [k, v] : model.table.w) {
        if (k.cond < 1 || k.cond > conditions) continue;
        const double p = grid.gain_power_center(k) * v;
        auto& g = global[static_cast<std::size_t>(k.cond)];
        g.wsum += v;
        g.psum += p;
        const bool same_uav = k.axis[0] == q.axis[0] && k.axis[1] == q.axis[1] &&
                              k.axis[2] == q.axis[2];
        if (!same_uav) continue;
        const int due = std::max(std::abs(k.axis[3] - q.axis[3]),
                                 std::abs(k.axis[4] - q.axis[4]));
        if (due <= neighborhood && k.axis[5] == q.axis[5]) {
            auto& nb = near[static_cast<std::size_t>(k.cond)];
            nb.wsum += v;
            nb.psum += p;
        }
    }

    auto pick = [&](const std::vector<Acc>& acc) -> int {
        int best = 0;
        double best_score = -1.0;
        for (int k = 1; k <= conditions; ++k) {
            const auto& a = acc[static_cast<std::size_t>(k)];
            if (a.wsum <= 0.0) continue;
            const double score = a.psum / a.wsum;
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        return best;
    };

    BeamChoice choice;
    if (int k = pick(near); k > 0) {
        choice.condition = k;
        choice.source = BeamChoice::Source::kNearBin;
    } else if (int k2 = pick(global); k2 > 0) {
        choice.condition = k2;
        choice.source = BeamChoice::Source::kGlobalFallback;
    } else {
        throw ContractViolation("map_beam_select: empty model");
    }
    return choice;
}

struct RateStats {
    double mean_bps = 0.0;
    double ci95_bps = 0.0;       // half-width
    double agreement = 0.0;      // fraction matching the exhaustive search
    long fallbacks = 0;          // global-fallback picks
};

struct RateEvaluation {
    RateStats perfect_csi;
    RateStats distributed;
    RateStats standalone;
    int draws = 0;
};

namespace detail {

inline RateStats finalize_rate(std::vector<double>& rates, long agree, long fallbacks) {
    RateStats st;
    const auto n = static_cast<double>(rates.size());
    for (double r : rates) st.mean_bps += r;
    st.mean_bps /= n;
    double var = 0.0;
    for (double r : rates) var += (r - st.mean_bps) * (r - st.mean_bps);
    var /= std::max(1.0, n - 1.0);
    st.ci95_bps = 1.96 * std::sqrt(var / n);
    st.agreement = static_cast<double>(agree) / n;
    st.fallbacks = fallbacks;
    return st;
}

}  // namespace detail

/// Online downlink evaluation. Each draw places a UE uniformly in the whole
/// service area; the serving UAV flies to the hover point of the UE's strip,
/// so queries land outside a stand-alone model's collected region three
/// quarters of the time. The same placements and channels score every method,
/// and the exhaustive true-channel pick upper-bounds both model picks.
inline RateEvaluation eval_downlink_rate(
    const ExperimentConfig& cfg, const Scenario& sc,
    const std::vector<const GenerativeModel*>& distributed,
    const std::vector<const GenerativeModel*>& standalone, std::uint64_t seed) {
    const int n_uavs = static_cast<int>(sc.nodes.size());
    if (static_cast<int>(distributed.size()) != n_uavs ||
        static_cast<int>(standalone.size()) != n_uavs)
        throw ContractViolation("eval_downlink_rate: one model per UAV required");

    const int k_count = sc.codebook.size();
    const double noise = cfg.downlink_noise_w();
    const double array_gain =
        static_cast<double>(cfg.tx_elements) * static_cast<double>(cfg.rx_elements);

    Rng rng(derive_seed(seed, "rate-eval"));
    std::vector<double> rate_perfect, rate_dist, rate_sa;
    long agree_dist = 0, agree_sa = 0, fb_dist = 0, fb_sa = 0;

    for (int draw = 0; draw < cfg.eval_draws; ++draw) {
        const Vec3 ue{rng.uniform(0.0, cfg.region_x_m), rng.uniform(0.0, cfg.region_y_m),
                      0.0};
        const int region = sc.region_of(ue.x);
        const Vec3 uav = sc.nodes[static_cast<std::size_t>(region)].position;
        const double t = rng.uniform(0.0, cfg.time_window_s);
        const int evaluated_uav = static_cast<int>(
            rng.uniform_index(static_cast<std::uint64_t>(n_uavs)));

        // one channel realization scores every method
        const LinkState state = sc.env.draw_state(uav, ue, rng);
        const double d3 = std::max(distance(uav, ue), 1e-3);
        double base_amp = 0.0;
        if (state != LinkState::kOutage) {
            base_amp = sc.env.carrier_wavelength / (4.0 * kPi * d3);
            double loss_db = rng.normal(0.0, state == LinkState::kLos
                                                 ? sc.env.shadow_sigma_los_db
                                                 : sc.env.shadow_sigma_nlos_db);
            if (state == LinkState::kNlos) loss_db += sc.env.nlos_extra_loss_db;
            base_amp *= std::pow(10.0, -loss_db / 20.0);
        }
        const double sin_t = sc.env.true_sin_aod(uav, ue);
        const double sin_r = sc.env.true_sin_aoa(uav, ue);
        auto beam_power = [&](int k) {
            const auto& e = sc.codebook.at(k);
            const double g = sc.env.lobe_power(std::sin(e.aod) - sin_t) *
                             sc.env.lobe_power(std::sin(e.aoa) - sin_r);
            const double a = base_amp * base_amp * g;
            return a;  // |alpha_k|^2
        };
        auto rate_of = [&](int k) {
            const double snr = cfg.downlink_power_w * beam_power(k) * array_gain *
                               array_gain / noise;
            return cfg.downlink_bandwidth_hz * std::log2(1.0 + snr);
        };

        int best_k = 1;
        double best_p = -1.0;
        for (int k = 1; k <= k_count; ++k) {
            const double p = beam_power(k);
            if (p > best_p) {
                best_p = p;
                best_k = k;
            }
        }
        const double perfect_rate = rate_of(best_k);
        rate_perfect.push_back(perfect_rate);

        const auto pick_dist = map_beam_select(
            *distributed[static_cast<std::size_t>(evaluated_uav)], sc.grid, uav, ue, t,
            k_count, cfg.map_neighborhood);
        const double dist_rate = rate_of(pick_dist.condition);
        rate_dist.push_back(dist_rate);
        agree_dist += pick_dist.condition == best_k;
        fb_dist += pick_dist.source == BeamChoice::Source::kGlobalFallback;

        const auto pick_sa = map_beam_select(
            *standalone[static_cast<std::size_t>(evaluated_uav)], sc.grid, uav, ue, t,
            k_count, cfg.map_neighborhood);
        const double sa_rate = rate_of(pick_sa.condition);
        rate_sa.push_back(sa_rate);
        agree_sa += pick_sa.condition == best_k;
        fb_sa += pick_sa.source == BeamChoice::Source::kGlobalFallback;

        // the exhaustive pick bounds every model pick in every replication
        if (perfect_rate + 1e-9 < dist_rate || perfect_rate + 1e-9 < sa_rate)
            throw ContractViolation("eval_downlink_rate: exhaustive pick not dominant");
    }

    RateEvaluation ev;
    ev.draws = cfg.eval_draws;
    ev.perfect_csi = detail::finalize_rate(rate_perfect, cfg.eval_draws, 0);
    ev.distributed = detail::finalize_rate(rate_dist, agree_dist, fb_dist);
    ev.standalone = detail::finalize_rate(rate_sa, agree_sa, fb_sa);
    return ev;
}

// ---------------------------------------------------------------------------
// Training runner, comparison, sweeps
// ---------------------------------------------------------------------------

struct IterationMetricsRow {
    long iteration = 0;
    int uav_id = 0;
    double jsd_to_global = 0.0;
    double discriminator_mean = 0.5;
    double value = 0.0;
    double support_fraction = 0.0;
};

struct TrainRun {
    UavGraph graph;
    std::vector<int> ring_next;
    std::vector<UavLearningState> states;
    SparseDist global;  // empirical distribution of the pooled raw datasets
    CompletionParams completion;
    int rounds = 0;     // T_G unless overridden
    std::vector<IterationMetricsRow> metrics;
};

/// Form the topology, derive T_G, run the exchange protocol that long, and
/// capture per-iteration metrics.
inline TrainRun run_training(const ExperimentConfig& cfg, const Scenario& sc,
                             int rounds_override = 0) {
    auto formation = network_formation(sc.nodes, cfg.constraints_for(cfg.rb_budget));
    if (!formation.ok())
        throw InfeasibleScenario("network formation failed: " + formation.report.reason);
    audit_formation(*formation.graph, cfg.constraints_for(cfg.rb_budget));

    TrainRun run;
    run.graph = *formation.graph;
    run.ring_next = formation.ring_next;
    run.completion = completion_params_for(cfg, run.graph, cfg.rb_budget);
    if (rounds_override > 0) {
        run.rounds = rounds_override;
    } else if (cfg.train_rounds > 0) {
        run.rounds = cfg.train_rounds;
    } else {
        run.rounds = required_iterations(run.completion).iterations;
    }

    run.global = centralized_model(sc.grid, sc.datasets).table;
    const LearningParams lp = cfg.learning();
    for (const auto& ds : sc.datasets)
        run.states.push_back(UavLearningState::init(sc.grid, ds, cfg.disc_error));

    const double global_support = static_cast<double>(run.global.support_size());
    for (int round = 1; round <= run.rounds; ++round) {
        train_iteration(run.states, run.graph, lp, round);
        for (const auto& st : run.states) {
            IterationMetricsRow row;
            row.iteration = round;
            row.uav_id = st.id;
            row.jsd_to_global = symmetric_kl(st.generator.table, run.global, lp.log_floor);
            row.discriminator_mean = st.discriminator.mean_on_support();
            row.value = value_function(st.discriminator, st.generator, st.round_mixture,
                                       lp.conditions, lp.log_floor);
            row.support_fraction =
                static_cast<double>(st.generator.table.support_size()) / global_support;
            run.metrics.push_back(row);
        }
    }
    return run;
}

struct ComparisonResult {
    int t_g = 0;
    double jsd_standalone = 0.0;
    double jsd_distributed = 0.0;
    double jsd_centralized = 0.0;
    BaselineLoads loads;
};

/// Accuracy and communication-load comparison of the three learners on the
/// disjoint-strip scenario.
inline ComparisonResult run_learning_comparison(const ExperimentConfig& cfg,
                                                const Scenario& sc) {
    auto run = run_training(cfg, sc);
    ComparisonResult res;
    res.t_g = run.rounds;

    std::vector<const SparseDist*> dist_tables, sa_tables, cen_tables;
    std::vector<GenerativeModel> sa_models, cen_model;
    for (const auto& st : run.states) dist_tables.push_back(&st.generator.table);
    for (const auto& ds : sc.datasets)
        sa_models.push_back(standalone_model(sc.grid, ds));
    for (const auto& m : sa_models) sa_tables.push_back(&m.table);
    cen_model.push_back(centralized_model(sc.grid, sc.datasets));
    for (std::size_t i = 0; i < sc.datasets.size(); ++i)
        cen_tables.push_back(&cen_model[0].table);

    const double floor = cfg.log_floor;
    res.jsd_distributed = jsd_metric(dist_tables, run.global, floor);
    res.jsd_standalone = jsd_metric(sa_tables, run.global, floor);
    res.jsd_centralized = jsd_metric(cen_tables, run.global, floor);
    res.loads = baseline_loads(run.completion, cfg.model_param_count, run.rounds,
                               cfg.bits_per_scalar);
    return res;
}

struct SweepPoint {
    double axis_value = 0.0;
    bool feasible = false;
    std::string note;
    int l_max = 0;
    int l_loop_min = 0;
    int t_g = 0;
    double completion_seconds = 0.0;
    double load_scalars = 0.0;
    double p_closed_at_tg = 0.0;
    double p_mc_at_tg = 0.0;
    double p_mc_stderr = 0.0;
};

enum class SweepAxis { kRbBudget, kUavCount, kShareRatio, kDiscError };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::kRbBudget: return "rb_budget";
        case SweepAxis::kUavCount: return "uav_count";
        case SweepAxis::kShareRatio: return "share_ratio";
        case SweepAxis::kDiscError: return "disc_error";
    }
    return "?";
}

/// One completion-analysis sweep along an axis: form the network, evaluate
/// the closed form and the Monte-Carlo spread at T_G, record time and load.
/// Infeasible points are flagged and the sweep continues.
inline std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis) {
    std::vector<double> values;
    switch (axis) {
        case SweepAxis::kRbBudget:
            for (int b : base.sweep_rb) values.push_back(b);
            break;
        case SweepAxis::kUavCount:
            for (int i : base.sweep_uavs) values.push_back(i);
            break;
        case SweepAxis::kShareRatio:
            values = base.sweep_share;
            break;
        case SweepAxis::kDiscError:
            values = base.sweep_error;
            break;
    }
    std::sort(values.begin(), values.end());  // canonical output ordering

    std::vector<SweepPoint> points;
    for (double v : values) {
        ExperimentConfig cfg = base;
        int uavs = cfg.uav_count;
        int rb = cfg.rb_budget;
        switch (axis) {
            case SweepAxis::kRbBudget: rb = static_cast<int>(v); break;
            case SweepAxis::kUavCount:
                uavs = static_cast<int>(v);
                rb = std::max(cfg.rb_budget, uavs);  // one RB per UAV at least
                break;
            case SweepAxis::kShareRatio: cfg.share_ratio = v; break;
            case SweepAxis::kDiscError: cfg.disc_error = v; break;
        }
        cfg.uav_count = uavs;
        cfg.rb_budget = rb;
        SweepPoint pt;
        pt.axis_value = v;
        try {
            cfg.validate();
            Scenario sc = build_scenario(cfg, uavs, rb);
            auto formation = network_formation(sc.nodes, cfg.constraints_for(rb));
            if (!formation.ok()) throw InfeasibleScenario(formation.report.reason);
            const auto params = completion_params_for(cfg, *formation.graph, rb);
            const auto req = required_iterations(params);
            pt.feasible = true;
            pt.l_max = params.l_max;
            pt.l_loop_min = params.l_loop_min;
            pt.t_g = req.iterations;
            pt.completion_seconds = completion_time(params, req.iterations);
            pt.load_scalars = comm_load(params, req.iterations).scalars;
            pt.p_closed_at_tg = req.probability;
            const int horizon = std::min(std::max(req.iterations, params.l_max + 2),
                                         base.spread_horizon);
            auto mc = spread_simulator(*formation.graph, params, base.spread_trials,
                                       derive_seed(base.seed, "sweep-mc",
                                                   static_cast<std::uint64_t>(
                                                       points.size())),
                                       horizon);
            const int at = std::min(req.iterations, horizon);
            pt.p_mc_at_tg = mc.probability[static_cast<std::size_t>(at)];
            pt.p_mc_stderr = mc.stderr_[static_cast<std::size_t>(at)];
        } catch (const std::exception& e) {
            pt.feasible = false;
            pt.note = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

}  // namespace uavgan
