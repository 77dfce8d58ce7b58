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

#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>

#include "uavgan/config.hpp"
#include "uavgan/experiments.hpp"
#include "uavgan/io.hpp"

using namespace uavgan;

namespace {

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "uavgan_io_test";
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.tx_elements = 16;
    cfg.rx_elements = 8;
    cfg.dataset_size = 120;
    cfg.spatial_bins = 8;
    cfg.spread_trials = 500;
    cfg.eval_draws = 50;
    cfg.validate();
    return cfg;
}

}  // namespace

TEST_CASE("double formatting round-trips exactly") {
    Rng rng(9);
    for (int t = 0; t < 2000; ++t) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-20.0, 20.0));
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(std::strtod(format_double(0.1).c_str(), nullptr) == 0.1);
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("dataset csv and json round-trips are exact") {
    auto cfg = small_config();
    Scenario sc = build_scenario(cfg, 4, 4);
    const auto dir = temp_dir();

    const auto csv_path = (dir / "ds.csv").string();
    write_datasets_csv(csv_path, sc.datasets);
    auto back = read_datasets_csv(csv_path);
    REQUIRE(back.size() == sc.datasets.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        REQUIRE(back[i].size() == sc.datasets[i].size());
        CHECK(back[i].owner_id == sc.datasets[i].owner_id);
        for (int n = 0; n < back[i].size(); ++n) {
            const auto& a = back[i].samples[static_cast<std::size_t>(n)];
            const auto& b = sc.datasets[i].samples[static_cast<std::size_t>(n)];
            CHECK(a.uav_pos == b.uav_pos);
            CHECK(a.ue_pos == b.ue_pos);
            CHECK(a.time == b.time);
            CHECK(a.gain_est == b.gain_est);
            CHECK(a.condition_idx == b.condition_idx);
        }
    }
    // byte-stable re-emission
    const auto csv2 = (dir / "ds2.csv").string();
    write_datasets_csv(csv2, back);
    CHECK(slurp(csv_path) == slurp(csv2));

    const auto json_path = (dir / "ds.json").string();
    write_json_file(json_path, datasets_to_json(sc.datasets));
    auto jback = datasets_from_json(read_json_file(json_path));
    REQUIRE(jback.size() == sc.datasets.size());
    for (std::size_t i = 0; i < jback.size(); ++i)
        for (int n = 0; n < jback[i].size(); ++n)
            CHECK(jback[i].samples[static_cast<std::size_t>(n)].gain_est ==
                  sc.datasets[i].samples[static_cast<std::size_t>(n)].gain_est);
}

TEST_CASE("graph json round-trip") {
    auto cfg = small_config();
    Scenario sc = build_scenario(cfg, 4, 4);
    auto res = network_formation(sc.nodes, cfg.constraints());
    REQUIRE(res.ok());
    const auto dir = temp_dir();
    const auto path = (dir / "graph.json").string();
    write_json_file(path, graph_to_json(*res.graph));
    auto back = graph_from_json(read_json_file(path));
    REQUIRE(back.node_count() == res.graph->node_count());
    REQUIRE(back.edge_count() == res.graph->edge_count());
    for (int i = 0; i < back.node_count(); ++i) {
        CHECK(back.nodes[static_cast<std::size_t>(i)].position ==
              res.graph->nodes[static_cast<std::size_t>(i)].position);
        CHECK(back.out[static_cast<std::size_t>(i)] ==
              res.graph->out[static_cast<std::size_t>(i)]);
    }
    for (std::size_t e = 0; e < back.edges.size(); ++e) {
        CHECK(back.edges[e].tx_power_w == res.graph->edges[e].tx_power_w);
        CHECK(back.edges[e].rate_bps == res.graph->edges[e].rate_bps);
        back.edges[e].audit();
    }
}

TEST_CASE("model json round-trip") {
    auto cfg = small_config();
    Scenario sc = build_scenario(cfg, 2, 2);
    auto model = GenerativeModel::from_dataset(sc.grid, sc.datasets[0]);
    const auto dir = temp_dir();
    const auto path = (dir / "model.json").string();
    write_json_file(path, model_to_json(model, sc.grid));
    BinGrid grid_back;
    auto back = model_from_json(read_json_file(path), &grid_back);
    CHECK(grid_back.same_as(sc.grid));
    REQUIRE(back.table.support_size() == model.table.support_size());
    for (const auto& [k, v] : model.table.w) CHECK(back.table.at(k) == v);
    CHECK(back.absorbed_mass == model.absorbed_mass);

    // byte-stable re-emission (canonical entry order)
    const auto path2 = (dir / "model2.json").string();
    write_json_file(path2, model_to_json(back, grid_back));
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("csv tables keep comments and cells") {
    CsvTable t;
    t.params["alpha"] = "0.5";
    t.params["note"] = "text=with=equals";
    t.columns = {"a", "b", "c"};
    t.rows.push_back({"1", "x", format_double(0.1)});
    t.rows.push_back({"2", "", "3.5e-12"});
    const auto dir = temp_dir();
    const auto path = (dir / "t.csv").string();
    write_csv(path, t);
    auto back = read_csv(path);
    CHECK(back.params.at("alpha") == "0.5");
    CHECK(back.params.at("note") == "text=with=equals");
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0][2] == format_double(0.1));
    CHECK(back.rows[1][1].empty());
    CHECK(back.column_index("c") == 2);
    CHECK_THROWS_AS(back.column_index("zz"), IoError);
}

TEST_CASE("config defaults match the reference values") {
    ExperimentConfig cfg;
    cfg.validate();
    CHECK(cfg.tx_elements == 256);
    CHECK(cfg.rx_elements == 64);
    CHECK(cfg.conditions() == 81);
    CHECK(cfg.carrier_ghz == 30.0);
    CHECK(cfg.a2a_bandwidth_hz == 2e6);
    CHECK(cfg.max_power_dbm == 40.0);
    CHECK(cfg.disc_error == 0.1);
    CHECK(cfg.confidence == 0.99);
    CHECK(cfg.snr_threshold_db == 10.0);
    CHECK(cfg.tx_time == 0.01);
    CHECK(cfg.sample_scalars == 11.0);
    CHECK(cfg.share_ratio == 0.5);
    CHECK(cfg.dataset_size == 1000);
    CHECK(cfg.uav_count == 4);
    CHECK(cfg.rb_budget == 4);
    CHECK(cfg.region_x_m == 400.0);
    CHECK(cfg.region_y_m == 100.0);
    CHECK(cfg.downlink_bandwidth_hz == 50e6);
    CHECK(cfg.noise_power_w() ==
          Catch::Approx(dbm_to_watt(-174.0) * 2e6).epsilon(1e-12));
}

TEST_CASE("config json overlay") {
    SECTION("overlay changes only the given keys") {
        nlohmann::json j{{"share_ratio", 0.25}, {"uav_count", 6}, {"rb_budget", 6}};
        auto cfg = config_from_json(j);
        CHECK(cfg.share_ratio == 0.25);
        CHECK(cfg.uav_count == 6);
        CHECK(cfg.dataset_size == 1000);  // untouched default
    }
    SECTION("unknown keys are rejected") {
        nlohmann::json j{{"shear_ratio", 0.25}};
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }
    SECTION("range violations are rejected") {
        nlohmann::json j{{"share_ratio", 1.5}};
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
        nlohmann::json j2{{"rb_budget", 2}};  // below uav_count
        CHECK_THROWS_AS(config_from_json(j2), ConfigError);
    }
    SECTION("full serialization round-trips") {
        ExperimentConfig cfg = small_config();
        cfg.share_ratio = 0.75;
        cfg.gamma_kind = "saturating";
        auto j = config_to_json(cfg);
        auto back = config_from_json(j);
        CHECK(back.share_ratio == cfg.share_ratio);
        CHECK(back.gamma_kind == cfg.gamma_kind);
        CHECK(back.tx_elements == cfg.tx_elements);
        CHECK(config_to_json(back) == j);
    }
    SECTION("load_config handles defaults and missing files") {
        auto cfg = load_config("defaults");
        CHECK(cfg.uav_count == 4);
        CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
        const auto dir = temp_dir();
        const auto bad = (dir / "bad.json").string();
        std::ofstream(bad) << "{ not json";
        CHECK_THROWS_AS(load_config(bad), ConfigError);
    }
}

TEST_CASE("table to json carries params and rows") {
    CsvTable t;
    t.params["k"] = "v";
    t.columns = {"x", "y"};
    t.rows.push_back({"1", "2"});
    auto j = table_to_json(t);
    CHECK(j.at("params").at("k") == "v");
    CHECK(j.at("rows").at(0).at("x") == "1");
}
