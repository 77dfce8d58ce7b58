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

#include <string>
#include <vector>

#include "uavgan/antenna.hpp"
#include "uavgan/common.hpp"

namespace uavgan {

/// One measured (or generated) air-to-ground channel observation.
struct ChannelSample {
    Vec3 uav_pos;        // x
    Vec3 ue_pos;         // y
    double time = 0.0;   // seconds, local clock
    Complex gain_est;    // alpha~
    int condition_idx = 1;  // k in [1, K]

    void validate(int codebook_size) const {
        if (condition_idx < 1 || condition_idx > codebook_size)
            throw ContractViolation("ChannelSample: condition index out of range");
        if (!uav_pos.finite() || !ue_pos.finite() || !std::isfinite(time))
            throw ContractViolation("ChannelSample: non-finite fields");
    }
};

/// A UAV's channel dataset: the unit of everything exchanged downstream.
struct Dataset {
    int owner_id = 0;
    std::vector<ChannelSample> samples;

    int size() const { return static_cast<int>(samples.size()); }
};

enum class LinkState { kLos, kNlos, kOutage };

/// Synthetic ground-truth law for the air-to-ground mmWave environment.
///
/// Link state follows an elevation-angle logistic for LoS with a distance
/// ramp into outage. Per-state gains are free-space amplitude at the carrier
/// with log-normal shadowing and uniform phase. Beam mismatch attenuates the
/// gain as the codebook pair departs from the geometric angles, down to a
/// side-lobe floor. All constants live in the experiment config.
struct EnvironmentModel {
    Box3 region;                       // overall service volume
    double carrier_wavelength = 0.01;  // meters (30 GHz default)

    // link-state law
    double los_a = 9.61;      // logistic offset (degrees)
    double los_b = 0.16;      // logistic slope (1/degree)
    double outage_d0 = 500.0;  // meters: outage ramp start
    double outage_d1 = 1500.0; // meters: certain outage

    // per-state gain law
    double shadow_sigma_los_db = 4.0;
    double shadow_sigma_nlos_db = 8.0;
    double nlos_extra_loss_db = 18.0;

    // beam mismatch (sin-space): raised-cosine main lobe with a floor
    double beam_width_sin = 0.35;     // half-width of the main lobe
    double side_lobe_floor = 3e-5;    // per-side power floor

    // pilot stage
    double pilot_power = 1.0;         // watts
    double pilot_noise_var = 1e-16;   // sigma^2_UE, watts

    void validate() const {
        if (!region.valid()) throw ConfigError("EnvironmentModel: invalid region");
        if (!(carrier_wavelength > 0.0))
            throw ConfigError("EnvironmentModel: wavelength must be positive");
        if (!(outage_d1 > outage_d0) || !(outage_d0 > 0.0))
            throw ConfigError("EnvironmentModel: outage ramp must be increasing");
        if (!(beam_width_sin > 0.0) || !(side_lobe_floor >= 0.0) ||
            side_lobe_floor > 1.0)
            throw ConfigError("EnvironmentModel: bad beam mismatch constants");
        if (!(pilot_power > 0.0) || !(pilot_noise_var >= 0.0))
            throw ConfigError("EnvironmentModel: bad pilot constants");
    }

    struct StateProbs {
        double los = 0.0, nlos = 0.0, outage = 0.0;
    };

    /// {LoS, NLoS, outage} probabilities for a UAV/UE geometry; sums to 1.
    StateProbs state_probabilities(const Vec3& uav, const Vec3& ue) const {
        const double d3 = distance(uav, ue);
        const double dh = std::sqrt((uav.x - ue.x) * (uav.x - ue.x) +
                                    (uav.y - ue.y) * (uav.y - ue.y));
        const double elev_deg =
            std::atan2(uav.z - ue.z, std::max(dh, 1e-9)) * 180.0 / kPi;
        double p_out = 0.0;
        if (d3 > outage_d0)
            p_out = std::min(1.0, (d3 - outage_d0) / (outage_d1 - outage_d0));
        const double p_los_given_service =
            1.0 / (1.0 + los_a * std::exp(-los_b * (elev_deg - los_a)));
        StateProbs p;
        p.outage = p_out;
        p.los = (1.0 - p_out) * p_los_given_service;
        p.nlos = (1.0 - p_out) * (1.0 - p_los_given_service);
        return p;
    }

    /// Geometric sin-angles of the direct path. Departure is measured along
    /// the UAV array axis (x), arrival along the UE array axis (y).
    double true_sin_aod(const Vec3& uav, const Vec3& ue) const {
        const double d3 = std::max(distance(uav, ue), 1e-9);
        return (ue.x - uav.x) / d3;
    }
    double true_sin_aoa(const Vec3& uav, const Vec3& ue) const {
        const double d3 = std::max(distance(uav, ue), 1e-9);
        return (uav.y - ue.y) / d3;
    }

    /// Per-side main-lobe power factor for a sin-space mismatch.
    double lobe_power(double sin_mismatch) const {
        const double d = std::abs(sin_mismatch);
        if (d >= beam_width_sin) return side_lobe_floor;
        const double c = std::cos(0.5 * kPi * d / beam_width_sin);
        return std::max(c * c, side_lobe_floor);
    }

    LinkState draw_state(const Vec3& uav, const Vec3& ue, Rng& rng) const {
        const StateProbs p = state_probabilities(uav, ue);
        const double u = rng.uniform();
        if (u < p.outage) return LinkState::kOutage;
        if (u < p.outage + p.nlos) return LinkState::kNlos;
        return LinkState::kLos;
    }

    /// True single-path gain toward codebook pair `entry` for the geometry,
    /// given a drawn link state.
    Complex draw_gain(const Vec3& uav, const Vec3& ue, LinkState state,
                      const CodebookEntry& entry, Rng& rng) const {
        if (state == LinkState::kOutage) return {0.0, 0.0};
        const double d3 = std::max(distance(uav, ue), 1e-3);
        double amp = carrier_wavelength / (4.0 * kPi * d3);
        const double sigma = state == LinkState::kLos ? shadow_sigma_los_db
                                                      : shadow_sigma_nlos_db;
        double loss_db = rng.normal(0.0, sigma);
        if (state == LinkState::kNlos) loss_db += nlos_extra_loss_db;
        amp *= std::pow(10.0, -loss_db / 20.0);
        const double gt = lobe_power(std::sin(entry.aod) - true_sin_aod(uav, ue));
        const double gr = lobe_power(std::sin(entry.aoa) - true_sin_aoa(uav, ue));
        amp *= std::sqrt(gt * gr);
        return std::polar(amp, rng.uniform(0.0, 2.0 * kPi));
    }
};

/// Spatial/temporal window a dataset is collected over. Degenerate (point)
/// position boxes are allowed; an inverted box or empty time span is not.
struct CollectionWindow {
    Box3 uav_box;
    Box3 ue_box;
    double t_begin = 0.0;
    double t_end = 3600.0;

    void validate(const EnvironmentModel& env) const {
        if (!uav_box.valid() || !ue_box.valid())
            throw ConfigError("CollectionWindow: empty or inverted position box");
        if (!(t_end > t_begin))
            throw ConfigError("CollectionWindow: empty time window");
        if (!env.region.contains(uav_box.lo) || !env.region.contains(uav_box.hi) ||
            !env.region.contains(ue_box.lo) || !env.region.contains(ue_box.hi))
            throw ConfigError("CollectionWindow: window outside environment region");
    }
};

/// Collect a dataset of `count` pilot-estimated samples for one UAV.
///
/// Each sample draws (x, y, t) in the window, a uniform codebook index, the
/// true single-path gain from the environment, then runs the pilot chain
/// (received_pilot + estimate_gain). Deterministic for a fixed seed.
inline Dataset collect_dataset(const EnvironmentModel& env, const Codebook& codebook,
                               const AntennaConfig& cfg, const CollectionWindow& window,
                               int owner_id, int count, std::uint64_t seed) {
    env.validate();
    cfg.validate();
    window.validate(env);
    if (codebook.size() < 1)
        throw ContractViolation("collect_dataset: empty codebook");
    if (count < 1) throw ContractViolation("collect_dataset: count must be >= 1");

    Rng rng(seed);
    Dataset ds;
    ds.owner_id = owner_id;
    ds.samples.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) {
        ChannelSample s;
        s.uav_pos = rng.uniform_in(window.uav_box);
        s.ue_pos = rng.uniform_in(window.ue_box);
        s.time = rng.uniform(window.t_begin, window.t_end);
        s.condition_idx = static_cast<int>(rng.uniform_index(
                              static_cast<std::uint64_t>(codebook.size()))) + 1;
        const CodebookEntry& e = codebook.at(s.condition_idx);

        const LinkState state = env.draw_state(s.uav_pos, s.ue_pos, rng);
        const Complex alpha = env.draw_gain(s.uav_pos, s.ue_pos, state, e, rng);
        std::vector<PathComponent> paths{{alpha, e.aod, e.aoa}};
        const CMatrix h = mimo_channel(paths, cfg);

        CVector noise(static_cast<std::size_t>(cfg.rx_elements));
        for (auto& z : noise) z = rng.cnormal(env.pilot_noise_var);

        const Complex r = received_pilot(h, e.w, e.q, env.pilot_power, noise);
        const CVector at = steering_vector(e.aod, cfg.tx_elements, cfg.element_phase_unit);
        const CVector ar = steering_vector(e.aoa, cfg.rx_elements, cfg.element_phase_unit);
        const Complex beta = beta_coefficient(e.w, e.q, at, ar, env.pilot_power);
        s.gain_est = estimate_gain(r, beta);
        ds.samples.push_back(s);
    }
    return ds;
}

}  // namespace uavgan
