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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavgan/config.hpp"
#include "uavgan/experiments.hpp"
#include "uavgan/io.hpp"

namespace uavgan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;

namespace cli_detail {

struct CommonOpts {
    std::string config_path = "defaults";
    std::string out_dir = "out";
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

inline void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path,
                    "config JSON path, or 'defaults' for the built-ins");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "override the config seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
}

inline ExperimentConfig resolve_config(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o.config_path);
    if (o.seed_set) cfg.seed = o.seed;
    cfg.validate();
    std::filesystem::create_directories(o.out_dir);
    return cfg;
}

inline std::string table_path(const CommonOpts& o, const std::string& stem) {
    return o.out_dir + "/" + stem + (o.format == "json" ? ".json" : ".csv");
}

inline void emit_table(const CommonOpts& o, const std::string& stem,
                       const CsvTable& t) {
    if (o.format == "json")
        write_json_file(table_path(o, stem), table_to_json(t));
    else
        write_csv(table_path(o, stem), t);
}

inline void echo_params(CsvTable& t, const ExperimentConfig& cfg) {
    t.params["seed"] = std::to_string(cfg.seed);
    t.params["uav_count"] = std::to_string(cfg.uav_count);
    t.params["rb_budget"] = std::to_string(cfg.rb_budget);
    t.params["share_ratio"] = format_double(cfg.share_ratio);
    t.params["disc_error"] = format_double(cfg.disc_error);
    t.params["confidence"] = format_double(cfg.confidence);
    t.params["tx_time"] = format_double(cfg.tx_time);
    t.params["train_time"] = format_double(cfg.train_time);
    t.params["sample_scalars"] = format_double(cfg.sample_scalars);
    t.params["bits_per_scalar"] = std::to_string(cfg.bits_per_scalar);
    t.params["dataset_size"] = std::to_string(cfg.dataset_size);
    t.params["gamma_kind"] = cfg.gamma_kind;
    t.params["gamma_target_hazard"] = format_double(cfg.gamma_target_hazard);
    t.params["gamma_hazard_decay"] = format_double(cfg.gamma_hazard_decay);
}

inline CsvTable completion_table(const ExperimentConfig& cfg,
                                 const CompletionParams& params, int horizon,
                                 const SpreadCurve* mc) {
    CsvTable t;
    echo_params(t, cfg);
    t.params["l_max"] = std::to_string(params.l_max);
    t.params["l_loop_min"] = std::to_string(params.l_loop_min);
    t.params["in_degree"] = std::to_string(params.in_degree);
    if (mc) t.params["trials"] = std::to_string(mc->trials);
    t.columns = {"T", "p_closed_form", "p_oracle", "p_monte_carlo", "stderr"};
    const auto curve = completion_curve(params, horizon);
    const int oracle_end = params.l_max + params.l_loop_min - 1;
    for (int T = 0; T <= horizon; ++T) {
        std::vector<std::string> row(5);
        row[0] = std::to_string(T);
        row[1] = format_double(curve.probability[static_cast<std::size_t>(T)]);
        row[2] = T <= oracle_end ? format_double(recursion_oracle(T, params)) : "";
        if (mc && T < static_cast<int>(mc->probability.size())) {
            row[3] = format_double(mc->probability[static_cast<std::size_t>(T)]);
            row[4] = format_double(mc->stderr_[static_cast<std::size_t>(T)]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline int cmd_formation(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    auto res = network_formation(sc.nodes, cfg.constraints());
    if (!res.ok()) {
        std::cerr << "infeasible: " << res.report.reason << "\n";
        return kExitInfeasible;
    }
    audit_formation(*res.graph, cfg.constraints());
    auto j = graph_to_json(*res.graph);
    j["ring_next"] = res.ring_next;
    j["refined"] = res.refined;
    write_json_file(o.out_dir + "/graph.json", j);
    const auto prof = path_profile(*res.graph);
    std::cout << "formed " << res.graph->node_count() << " nodes, "
              << res.graph->edge_count() << " edges, l_max=" << prof.l_max
              << ", l_loop_min=" << prof.l_loop_min << "\n";
    return kExitOk;
}

inline int cmd_completion(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    auto res = network_formation(sc.nodes, cfg.constraints());
    if (!res.ok()) {
        std::cerr << "infeasible: " << res.report.reason << "\n";
        return kExitInfeasible;
    }
    const auto params = completion_params_for(cfg, *res.graph, cfg.rb_budget);
    int t_g = -1;
    double p_at = 0.0;
    try {
        const auto req = required_iterations(params);
        t_g = req.iterations;
        p_at = req.probability;
    } catch (const NonAttainmentError& e) {
        std::cerr << "confidence not attained within the cap; p(cap)="
                  << e.probability_at_cap << "\n";
        return kExitInfeasible;
    }
    const int horizon = std::max(t_g + 5, params.l_max + params.l_loop_min + 2);
    auto t = completion_table(cfg, params, horizon, nullptr);
    t.params["t_g"] = std::to_string(t_g);
    t.params["p_at_t_g"] = format_double(p_at);
    t.params["completion_seconds"] = format_double(completion_time(params, t_g));
    t.params["load_scalars"] = format_double(comm_load(params, t_g).scalars);
    emit_table(o, "completion", t);
    std::cout << "T_G=" << t_g << " C=" << completion_time(params, t_g)
              << "s load=" << comm_load(params, t_g).scalars << " scalars\n";
    return kExitOk;
}

inline int cmd_spread_sim(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    auto res = network_formation(sc.nodes, cfg.constraints());
    if (!res.ok()) {
        std::cerr << "infeasible: " << res.report.reason << "\n";
        return kExitInfeasible;
    }
    const auto params = completion_params_for(cfg, *res.graph, cfg.rb_budget);
    const auto mc = spread_simulator(*res.graph, params, cfg.spread_trials,
                                     derive_seed(cfg.seed, "spread"),
                                     cfg.spread_horizon);
    auto t = completion_table(cfg, params, cfg.spread_horizon, &mc);
    emit_table(o, "spread", t);
    std::cout << "spread simulation: " << cfg.spread_trials << " trials over T<="
              << cfg.spread_horizon << "\n";
    return kExitOk;
}

inline int cmd_train(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    TrainRun run;
    try {
        run = run_training(cfg, sc);
    } catch (const InfeasibleScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    }

    if (o.format == "json")
        write_json_file(o.out_dir + "/datasets.json", datasets_to_json(sc.datasets));
    else
        write_datasets_csv(o.out_dir + "/datasets.csv", sc.datasets);
    write_json_file(o.out_dir + "/graph.json", graph_to_json(run.graph));

    CsvTable t;
    echo_params(t, cfg);
    t.params["t_g"] = std::to_string(run.rounds);
    t.columns = {"iteration", "uav_id", "jsd_to_global", "discriminator_mean",
                 "value_function", "support_fraction"};
    for (const auto& row : run.metrics) {
        t.rows.push_back({std::to_string(row.iteration), std::to_string(row.uav_id),
                          format_double(row.jsd_to_global),
                          format_double(row.discriminator_mean),
                          format_double(row.value),
                          format_double(row.support_fraction)});
    }
    emit_table(o, "metrics", t);

    for (const auto& st : run.states)
        write_json_file(o.out_dir + "/model_" + std::to_string(st.id) + ".json",
                        model_to_json(st.generator, sc.grid));

    const auto rep = equilibrium_check(run.states, run.global, cfg.conditions());
    std::cout << "trained " << run.rounds << " rounds; equilibrium "
              << (rep.all_pass ? "reached" : "not reached") << "\n";
    return kExitOk;
}

inline int cmd_compare(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    ComparisonResult res;
    try {
        res = run_learning_comparison(cfg, sc);
    } catch (const InfeasibleScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    }
    CsvTable t;
    echo_params(t, cfg);
    t.params["t_g"] = std::to_string(res.t_g);
    t.params["model_param_count"] = std::to_string(cfg.model_param_count);
    t.columns = {"learner", "jsd_nats", "load_scalars", "load_bits"};
    t.rows.push_back({"standalone", format_double(res.jsd_standalone), "0", "0"});
    t.rows.push_back({"distributed", format_double(res.jsd_distributed),
                      format_double(res.loads.proposed_scalars),
                      format_double(res.loads.proposed_bits)});
    t.rows.push_back({"centralized", format_double(res.jsd_centralized), "", ""});
    t.rows.push_back({"multi_discriminator", "", format_double(res.loads.md_scalars),
                      format_double(res.loads.md_bits)});
    t.rows.push_back({"parameter_averaging", "", format_double(res.loads.fl_params),
                      format_double(res.loads.fl_bits)});
    emit_table(o, "comparison", t);
    std::cout << "jsd standalone=" << res.jsd_standalone
              << " distributed=" << res.jsd_distributed
              << " centralized=" << res.jsd_centralized << "\n";
    return kExitOk;
}

inline int cmd_eval_rate(const CommonOpts& o) {
    ExperimentConfig cfg = resolve_config(o);
    Scenario sc = build_scenario(cfg, cfg.uav_count, cfg.rb_budget);
    TrainRun run;
    try {
        run = run_training(cfg, sc);
    } catch (const InfeasibleScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    }
    std::vector<GenerativeModel> sa;
    for (const auto& ds : sc.datasets) sa.push_back(standalone_model(sc.grid, ds));
    std::vector<const GenerativeModel*> dist_ptr, sa_ptr;
    for (const auto& st : run.states) dist_ptr.push_back(&st.generator);
    for (const auto& m : sa) sa_ptr.push_back(&m);
    const auto ev = eval_downlink_rate(cfg, sc, dist_ptr, sa_ptr,
                                       derive_seed(cfg.seed, "eval"));
    CsvTable t;
    echo_params(t, cfg);
    t.params["draws"] = std::to_string(ev.draws);
    t.columns = {"method", "mean_rate_bps", "ci95_bps", "agreement", "fallbacks"};
    auto row = [&](const char* name, const RateStats& st) {
        t.rows.push_back({name, format_double(st.mean_bps), format_double(st.ci95_bps),
                          format_double(st.agreement), std::to_string(st.fallbacks)});
    };
    row("perfect_csi", ev.perfect_csi);
    row("distributed", ev.distributed);
    row("standalone", ev.standalone);
    emit_table(o, "rates", t);
    std::cout << "mean rates (bps): perfect=" << ev.perfect_csi.mean_bps
              << " distributed=" << ev.distributed.mean_bps
              << " standalone=" << ev.standalone.mean_bps << "\n";
    return kExitOk;
}

inline int cmd_sweep(const CommonOpts& o, const std::string& axis_arg) {
    ExperimentConfig cfg = resolve_config(o);
    SweepAxis axis;
    if (axis_arg == "B") axis = SweepAxis::kRbBudget;
    else if (axis_arg == "I") axis = SweepAxis::kUavCount;
    else if (axis_arg == "eta") axis = SweepAxis::kShareRatio;
    else if (axis_arg == "epsilon") axis = SweepAxis::kDiscError;
    else {
        std::cerr << "unknown sweep axis '" << axis_arg << "'\n";
        return kExitConfigError;
    }
    const auto points = run_sweep(cfg, axis);
    CsvTable t;
    echo_params(t, cfg);
    t.params["axis"] = axis_name(axis);
    t.columns = {"axis_value", "feasible", "l_max", "l_loop_min", "t_g",
                 "completion_seconds", "load_scalars", "p_closed_at_tg",
                 "p_mc_at_tg", "p_mc_stderr", "note"};
    for (const auto& p : points) {
        t.rows.push_back({format_double(p.axis_value), p.feasible ? "1" : "0",
                          std::to_string(p.l_max), std::to_string(p.l_loop_min),
                          std::to_string(p.t_g), format_double(p.completion_seconds),
                          format_double(p.load_scalars),
                          format_double(p.p_closed_at_tg), format_double(p.p_mc_at_tg),
                          format_double(p.p_mc_stderr), p.note});
    }
    emit_table(o, std::string("sweep_") + axis_name(axis), t);
    for (const auto& p : points)
        std::cout << axis_name(axis) << "=" << p.axis_value
                  << (p.feasible ? " T_G=" + std::to_string(p.t_g)
                                 : " infeasible: " + p.note)
                  << "\n";
    return kExitOk;
}

}  // namespace cli_detail

/// Entry point behind main(); also called directly by tests.
inline int cli_run(int argc, const char* const* argv) {
    using namespace cli_detail;
    CLI::App app{"cooperative generative channel modeling for UAV mmWave networks"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string sweep_axis = "B";

    auto* formation = app.add_subcommand("formation", "form the exchange topology");
    add_common(formation, opts);
    auto* completion = app.add_subcommand("completion", "closed-form completion curve");
    add_common(completion, opts);
    auto* spread = app.add_subcommand("spread-sim", "Monte-Carlo information spread");
    add_common(spread, opts);
    auto* train = app.add_subcommand("train", "run the exchange protocol");
    add_common(train, opts);
    auto* compare = app.add_subcommand("compare", "learner accuracy and load comparison");
    add_common(compare, opts);
    auto* eval_rate = app.add_subcommand("eval-rate", "online downlink-rate evaluation");
    add_common(eval_rate, opts);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(sweep, opts);
    sweep->add_option("--axis", sweep_axis, "one of B, I, eta, epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (formation->parsed()) return cmd_formation(opts);
        if (completion->parsed()) return cmd_completion(opts);
        if (spread->parsed()) return cmd_spread_sim(opts);
        if (train->parsed()) return cmd_train(opts);
        if (compare->parsed()) return cmd_compare(opts);
        if (eval_rate->parsed()) return cmd_eval_rate(opts);
        if (sweep->parsed()) return cmd_sweep(opts, sweep_axis);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const InfeasibleScenario& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfigError;
}

}  // namespace uavgan
