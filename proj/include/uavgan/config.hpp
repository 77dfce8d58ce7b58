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

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavgan/antenna.hpp"
#include "uavgan/common.hpp"
#include "uavgan/completion.hpp"
#include "uavgan/environment.hpp"
#include "uavgan/histogram.hpp"
#include "uavgan/learning.hpp"
#include "uavgan/topology.hpp"

namespace uavgan {

/// Experiment configuration with the reference defaults. A JSON file
/// overlays any subset of the keys; unknown keys are rejected.
struct ExperimentConfig {
    std::uint64_t seed = 1;

    // antenna array and pilot codebook
    int tx_elements = 256;            // M
    int rx_elements = 64;             // N
    double carrier_ghz = 30.0;
    int codebook_grid_aod = 9;        // K = aod * aoa = 81
    int codebook_grid_aoa = 9;
    double codebook_sin_span = 0.9;   // grid over [-span, span] in sin space
    double element_phase_unit = kPi;

    // exchange protocol scalars
    double share_ratio = 0.5;     // eta
    double disc_error = 0.1;      // epsilon
    double confidence = 0.99;     // p_tau
    double tx_time = 0.01;        // t_tau, seconds
    double train_time = 0.09;     // t_eps, seconds
    double sample_scalars = 11.0; // rho
    int bits_per_scalar = 32;

    // airborne network
    int uav_count = 4;            // I
    int rb_budget = 4;            // B
    double max_power_dbm = 40.0;  // P_max
    double snr_threshold_db = 10.0;  // tau
    double a2a_bandwidth_hz = 2e6;   // w_b
    double a2a_carrier_ghz = 2.4;
    double noise_psd_dbm_hz = -174.0;
    long refine_cap = 100000;

    // service area and data collection
    double region_x_m = 400.0;
    double region_y_m = 100.0;
    double uav_altitude_m = 60.0;
    double time_window_s = 3600.0;
    int dataset_size = 1000;      // S_i

    // synthetic environment law
    double los_logistic_a = 9.61;
    double los_logistic_b = 0.16;
    double outage_ramp_start_m = 500.0;
    double outage_ramp_end_m = 1500.0;
    double shadow_sigma_los_db = 4.0;
    double shadow_sigma_nlos_db = 8.0;
    double nlos_extra_loss_db = 18.0;
    double beam_width_sin = 0.35;
    double side_lobe_floor = 3e-5;
    double pilot_power_w = 1.0;
    double pilot_noise_var_w = 1e-13;

    // completion analysis
    std::string gamma_kind = "loop-hazard";  // or "saturating"
    double gamma_target_hazard = 0.22;
    double gamma_hazard_decay = 0.60;
    double gamma_saturating_decay = 0.5;
    int iteration_cap = 10000;

    // learning protocol
    int minibatch = 128;          // u
    double log_floor = 1e-9;      // epsilon_floor
    int train_rounds = 0;         // 0: run for T_G rounds

    // sample-space discretization
    int spatial_bins = 16;
    int time_bins = 8;
    int gain_bins = 16;
    double gain_bin_range = 4e-5;

    // spread simulation
    int spread_trials = 100000;
    int spread_horizon = 40;

    // online evaluation
    double downlink_bandwidth_hz = 50e6;
    double downlink_power_w = 0.02;
    double downlink_noise_figure_db = 9.0;
    int eval_draws = 1000;
    int map_neighborhood = 1;
    std::int64_t model_param_count = 500000;

    // sweep grids
    std::vector<int> sweep_rb = {4, 8, 12};
    std::vector<int> sweep_uavs = {4, 5, 6, 8};
    std::vector<double> sweep_share = {0.25, 0.5, 0.75};
    std::vector<double> sweep_error = {0.01, 0.1, 0.2};

    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw ConfigError(std::string("config: ") + what);
        };
        require(tx_elements >= 1 && rx_elements >= 1, "element counts must be >= 1");
        require(carrier_ghz > 0.0 && a2a_carrier_ghz > 0.0, "carriers must be positive");
        require(codebook_grid_aod >= 1 && codebook_grid_aoa >= 1, "codebook grid must be >= 1");
        require(codebook_sin_span > 0.0 && codebook_sin_span < 1.0, "sin span must be in (0,1)");
        require(share_ratio > 0.0 && share_ratio <= 1.0, "eta must be in (0, 1]");
        require(disc_error >= 0.0 && disc_error < 1.0, "epsilon must be in [0, 1)");
        require(confidence > 0.0 && confidence < 1.0, "p_tau must be in (0, 1)");
        require(tx_time > 0.0 && train_time >= 0.0, "stage times must be positive");
        require(sample_scalars > 0.0, "rho must be positive");
        require(bits_per_scalar >= 1, "bits_per_scalar must be >= 1");
        require(uav_count >= 2, "need at least two nodes");
        require(rb_budget >= uav_count, "rb_budget must be >= uav_count");
        require(snr_threshold_db > -100.0, "snr threshold out of range");
        require(a2a_bandwidth_hz > 0.0, "a2a bandwidth must be positive");
        require(region_x_m > 0.0 && region_y_m > 0.0 && uav_altitude_m > 0.0,
                "region must be positive");
        require(time_window_s > 0.0, "time window must be positive");
        require(dataset_size >= 1, "dataset size must be >= 1");
        require(gamma_kind == "loop-hazard" || gamma_kind == "saturating",
                "gamma_kind must be loop-hazard or saturating");
        require(iteration_cap >= 1, "iteration cap must be >= 1");
        require(minibatch >= 1, "minibatch must be >= 1");
        require(log_floor > 0.0 && log_floor < 0.5, "log floor out of range");
        require(train_rounds >= 0, "train_rounds must be >= 0");
        require(spatial_bins >= 1 && time_bins >= 1 && gain_bins >= 1,
                "bin counts must be >= 1");
        require(gain_bin_range > 0.0, "gain bin range must be positive");
        require(spread_trials >= 1 && spread_horizon >= 1, "spread settings must be >= 1");
        require(downlink_bandwidth_hz > 0.0 && downlink_power_w > 0.0,
                "downlink settings must be positive");
        require(eval_draws >= 1, "eval draws must be >= 1");
        require(map_neighborhood >= 0, "map neighborhood must be >= 0");
        require(model_param_count >= 1, "model parameter count must be >= 1");
        require(!sweep_rb.empty() && !sweep_uavs.empty() && !sweep_share.empty() &&
                    !sweep_error.empty(),
                "sweep grids must be non-empty");
    }

    int conditions() const { return codebook_grid_aod * codebook_grid_aoa; }
    double max_power_w() const { return dbm_to_watt(max_power_dbm); }
    double noise_power_w() const {
        return dbm_to_watt(noise_psd_dbm_hz) * a2a_bandwidth_hz;
    }
    double downlink_noise_w() const {
        return dbm_to_watt(noise_psd_dbm_hz + downlink_noise_figure_db) *
               downlink_bandwidth_hz;
    }

    AntennaConfig antenna() const {
        AntennaConfig a;
        a.tx_elements = tx_elements;
        a.rx_elements = rx_elements;
        a.carrier_wavelength = kSpeedOfLight / (carrier_ghz * 1e9);
        a.element_phase_unit = element_phase_unit;
        return a;
    }

    Codebook codebook() const {
        return make_grid_codebook(antenna(), codebook_grid_aod, codebook_grid_aoa,
                                  -codebook_sin_span, codebook_sin_span);
    }

    EnvironmentModel environment() const {
        EnvironmentModel env;
        env.region = {{0.0, 0.0, 0.0},
                      {region_x_m, region_y_m, uav_altitude_m + 1.0}};
        env.carrier_wavelength = kSpeedOfLight / (carrier_ghz * 1e9);
        env.los_a = los_logistic_a;
        env.los_b = los_logistic_b;
        env.outage_d0 = outage_ramp_start_m;
        env.outage_d1 = outage_ramp_end_m;
        env.shadow_sigma_los_db = shadow_sigma_los_db;
        env.shadow_sigma_nlos_db = shadow_sigma_nlos_db;
        env.nlos_extra_loss_db = nlos_extra_loss_db;
        env.beam_width_sin = beam_width_sin;
        env.side_lobe_floor = side_lobe_floor;
        env.pilot_power = pilot_power_w;
        env.pilot_noise_var = pilot_noise_var_w;
        return env;
    }

    BinGrid bin_grid() const {
        BinGrid g;
        g.uav_range = {{0.0, 0.0, 0.0}, {region_x_m, region_y_m, uav_altitude_m + 1.0}};
        g.ue_range = {{0.0, 0.0, 0.0}, {region_x_m, region_y_m, 1.0}};
        g.t_lo = 0.0;
        g.t_hi = time_window_s;
        g.gain_lo = -gain_bin_range;
        g.gain_hi = gain_bin_range;
        g.spatial_bins = spatial_bins;
        g.time_bins = time_bins;
        g.gain_bins = gain_bins;
        return g;
    }

    ConstraintParams constraints() const { return constraints_for(rb_budget); }

    ConstraintParams constraints_for(int rb) const {
        ConstraintParams p;
        p.snr_threshold = db_to_linear(snr_threshold_db);
        p.tx_time_limit = tx_time;
        p.sample_scalars = sample_scalars;
        p.bits_per_scalar = bits_per_scalar;
        p.share_ratio = share_ratio;
        p.rb_budget = rb;
        p.bandwidth_hz = a2a_bandwidth_hz;
        p.noise_power_w = noise_power_w();
        p.a2a_wavelength = kSpeedOfLight / (a2a_carrier_ghz * 1e9);
        p.refine_cap = refine_cap;
        return p;
    }

    GammaSchedule gamma_schedule() const {
        GammaSchedule g;
        g.kind = gamma_kind == "saturating" ? GammaSchedule::Kind::kSaturating
                                            : GammaSchedule::Kind::kLoopHazard;
        g.saturating_decay = gamma_saturating_decay;
        g.target_hazard = gamma_target_hazard;
        g.hazard_decay = gamma_hazard_decay;
        return g;
    }

    LearningParams learning() const {
        LearningParams p;
        p.share_ratio = share_ratio;
        p.disc_error = disc_error;
        p.minibatch = minibatch;
        p.conditions = conditions();
        p.log_floor = log_floor;
        p.seed = derive_seed(seed, "learning");
        return p;
    }
};

namespace detail {

inline void overlay_field(const nlohmann::json& j, const char* key, double& v) {
    if (j.contains(key)) v = j.at(key).get<double>();
}
inline void overlay_field(const nlohmann::json& j, const char* key, int& v) {
    if (j.contains(key)) v = j.at(key).get<int>();
}
inline void overlay_field(const nlohmann::json& j, const char* key, std::int64_t& v) {
    if (j.contains(key)) v = j.at(key).get<std::int64_t>();
}
inline void overlay_field(const nlohmann::json& j, const char* key, std::uint64_t& v) {
    if (j.contains(key)) v = j.at(key).get<std::uint64_t>();
}
inline void overlay_field(const nlohmann::json& j, const char* key, std::string& v) {
    if (j.contains(key)) v = j.at(key).get<std::string>();
}
template <typename T>
inline void overlay_field(const nlohmann::json& j, const char* key,
                          std::vector<T>& v) {
    if (j.contains(key)) v = j.at(key).get<std::vector<T>>();
}

}  // namespace detail

#define UAVGAN_CONFIG_FIELDS(X)                                               \
    X(seed)                                                                   \
    X(tx_elements)                                                            \
    X(rx_elements)                                                            \
    X(carrier_ghz)                                                            \
    X(codebook_grid_aod)                                                      \
    X(codebook_grid_aoa)                                                      \
    X(codebook_sin_span)                                                      \
    X(element_phase_unit)                                                     \
    X(share_ratio)                                                            \
    X(disc_error)                                                             \
    X(confidence)                                                             \
    X(tx_time)                                                                \
    X(train_time)                                                             \
    X(sample_scalars)                                                         \
    X(bits_per_scalar)                                                        \
    X(uav_count)                                                              \
    X(rb_budget)                                                              \
    X(max_power_dbm)                                                          \
    X(snr_threshold_db)                                                       \
    X(a2a_bandwidth_hz)                                                       \
    X(a2a_carrier_ghz)                                                        \
    X(noise_psd_dbm_hz)                                                       \
    X(refine_cap)                                                             \
    X(region_x_m)                                                             \
    X(region_y_m)                                                             \
    X(uav_altitude_m)                                                         \
    X(time_window_s)                                                          \
    X(dataset_size)                                                           \
    X(los_logistic_a)                                                         \
    X(los_logistic_b)                                                         \
    X(outage_ramp_start_m)                                                    \
    X(outage_ramp_end_m)                                                      \
    X(shadow_sigma_los_db)                                                    \
    X(shadow_sigma_nlos_db)                                                   \
    X(nlos_extra_loss_db)                                                     \
    X(beam_width_sin)                                                         \
    X(side_lobe_floor)                                                        \
    X(pilot_power_w)                                                          \
    X(pilot_noise_var_w)                                                      \
    X(gamma_kind)                                                             \
    X(gamma_target_hazard)                                                    \
    X(gamma_hazard_decay)                                                     \
    X(gamma_saturating_decay)                                                 \
    X(iteration_cap)                                                          \
    X(minibatch)                                                              \
    X(log_floor)                                                              \
    X(train_rounds)                                                           \
    X(spatial_bins)                                                           \
    X(time_bins)                                                              \
    X(gain_bins)                                                              \
    X(gain_bin_range)                                                         \
    X(spread_trials)                                                          \
    X(spread_horizon)                                                         \
    X(downlink_bandwidth_hz)                                                  \
    X(downlink_power_w)                                                       \
    X(downlink_noise_figure_db)                                               \
    X(eval_draws)                                                             \
    X(map_neighborhood)                                                       \
    X(model_param_count)                                                      \
    X(sweep_rb)                                                               \
    X(sweep_uavs)                                                             \
    X(sweep_share)                                                            \
    X(sweep_error)

/// Overlay a JSON document onto the defaults; unknown keys are errors.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
    ExperimentConfig c;
    static const std::vector<std::string> known = {
#define UAVGAN_NAME(field) #field,
        UAVGAN_CONFIG_FIELDS(UAVGAN_NAME)
#undef UAVGAN_NAME
    };
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw ConfigError("config: unknown key '" + key + "'");
    }
    try {
#define UAVGAN_OVERLAY(field) detail::overlay_field(j, #field, c.field);
        UAVGAN_CONFIG_FIELDS(UAVGAN_OVERLAY)
#undef UAVGAN_OVERLAY
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
#define UAVGAN_EMIT(field) j[#field] = c.field;
    UAVGAN_CONFIG_FIELDS(UAVGAN_EMIT)
#undef UAVGAN_EMIT
    return j;
}

/// Load a config file; the literal name "defaults" (or empty) gives the
/// built-in defaults.
inline ExperimentConfig load_config(const std::string& path) {
    if (path.empty() || path == "defaults") {
        ExperimentConfig c;
        c.validate();
        return c;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace uavgan
