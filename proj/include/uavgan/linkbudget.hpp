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

#include "uavgan/common.hpp"

namespace uavgan {

/// Free-space power gain (<= 1) between isotropic elements at distance d.
inline double free_space_gain(double distance_m, double wavelength_m) {
    if (!(distance_m > 0.0) || !(wavelength_m > 0.0))
        throw ContractViolation("free_space_gain: distance and wavelength must be positive");
    const double x = wavelength_m / (4.0 * kPi * distance_m);
    return std::min(1.0, x * x);
}

/// UAV-to-UAV communication rate w_b * log2(1 + P*h/sigma^2), bits/second.
inline double a2a_rate(double tx_power_w, double path_gain, double noise_power_w,
                       double bandwidth_hz) {
    if (!(tx_power_w >= 0.0) || !(path_gain > 0.0) || !(noise_power_w > 0.0) ||
        !(bandwidth_hz > 0.0))
        throw ContractViolation("a2a_rate: arguments out of range");
    return bandwidth_hz * std::log2(1.0 + tx_power_w * path_gain / noise_power_w);
}

/// Fully-resolved directed link: chosen power, resulting SNR and rate.
struct LinkBudget {
    int src = 0, dst = 0;
    double path_gain = 0.0;     // h_ij, dimensionless <= 1
    double tx_power_w = 0.0;    // P_ij
    double bandwidth_hz = 0.0;  // w_b
    double noise_power_w = 0.0; // sigma^2
    double snr = 0.0;           // P*h/sigma^2
    double rate_bps = 0.0;      // w_b*log2(1+snr)

    void audit() const {
        const double want_snr = tx_power_w * path_gain / noise_power_w;
        const double want_rate = bandwidth_hz * std::log2(1.0 + want_snr);
        if (std::abs(snr - want_snr) > 1e-9 * std::max(1.0, want_snr) ||
            std::abs(rate_bps - want_rate) > 1e-6 * std::max(1.0, want_rate))
            throw ContractViolation("LinkBudget: derived fields inconsistent");
    }
};

/// Minimum transmit power meeting both an SNR floor and a rate floor.
/// Rate floor comes from having to push the per-iteration batch within the
/// transmission window. May exceed any power cap; callers compare.
inline double min_link_power(double path_gain, double noise_power_w,
                             double snr_threshold, double required_rate_bps,
                             double bandwidth_hz) {
    if (!(path_gain > 0.0) || !(noise_power_w > 0.0) || !(snr_threshold > 0.0) ||
        !(bandwidth_hz > 0.0) || !(required_rate_bps >= 0.0))
        throw ContractViolation("min_link_power: arguments out of range");
    const double p_snr = snr_threshold * noise_power_w / path_gain;
    const double snr_for_rate =
        std::exp2(required_rate_bps / bandwidth_hz) - 1.0;
    const double p_rate = snr_for_rate * noise_power_w / path_gain;
    return std::max(p_snr, p_rate);
}

/// Assemble the budget for a directed pair at the minimum feasible power.
inline LinkBudget make_link_budget(int src, int dst, double distance_m,
                                   double wavelength_m, double noise_power_w,
                                   double bandwidth_hz, double snr_threshold,
                                   double required_rate_bps) {
    LinkBudget b;
    b.src = src;
    b.dst = dst;
    b.path_gain = free_space_gain(distance_m, wavelength_m);
    b.bandwidth_hz = bandwidth_hz;
    b.noise_power_w = noise_power_w;
    b.tx_power_w = min_link_power(b.path_gain, noise_power_w, snr_threshold,
                                  required_rate_bps, bandwidth_hz);
    b.snr = b.tx_power_w * b.path_gain / noise_power_w;
    b.rate_bps = a2a_rate(b.tx_power_w, b.path_gain, noise_power_w, bandwidth_hz);
    return b;
}

}  // namespace uavgan
