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

#include <cstdint>
#include <vector>

#include "uavgan/common.hpp"

namespace uavgan {

/// Thrown when the confidence level cannot be attained within the iteration cap.
struct NonAttainmentError : std::runtime_error {
    double probability_at_cap;
    explicit NonAttainmentError(double p_cap)
        : std::runtime_error("confidence level not attained within the iteration cap"),
          probability_at_cap(p_cap) {}
};

/// Thrown when the hop-recursion oracle is queried outside its validity regime.
struct RegimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Acceleration-coefficient schedule for the looped-flow regime.
///
/// Both kinds pin gamma = 1 at the regime boundary and converge to 1 + N*eta.
///  - kSaturating rises monotonically: 1 + N*eta*(1 - c^(T-T0)). Under it the
///    per-iteration delivery probability keeps shrinking, so confidence levels
///    near 1 take hundreds of iterations.
///  - kLoopHazard (default) overshoots the dilution base and relaxes back so
///    that the per-iteration delivery probability levels off at
///    `target_hazard` once loop flow saturates. Calibrated so the default
///    scenarios complete at the reference iteration counts.
struct GammaSchedule {
    enum class Kind { kSaturating, kLoopHazard };

    Kind kind = Kind::kLoopHazard;
    double saturating_decay = 0.5;  // c in (0, 1)
    double target_hazard = 0.22;    // asymptotic per-iteration delivery prob.
    double hazard_decay = 0.60;     // geometric relaxation of the overshoot

    void validate() const {
        if (!(saturating_decay > 0.0) || saturating_decay >= 1.0)
            throw ContractViolation("GammaSchedule: saturating decay must be in (0,1)");
        if (!(target_hazard > 0.0) || target_hazard >= 1.0)
            throw ContractViolation("GammaSchedule: target hazard must be in (0,1)");
        if (!(hazard_decay > 0.0) || hazard_decay >= 1.0)
            throw ContractViolation("GammaSchedule: hazard decay must be in (0,1)");
    }
};

/// What the completion analysis consumes.
struct CompletionParams {
    double share_ratio = 0.5;   // eta in (0, 1]
    double disc_error = 0.1;    // epsilon in [0, 1)
    int in_degree = 1;          // N
    int l_max = 3;
    int l_loop_min = 4;
    double confidence = 0.99;   // p_tau in (0, 1)
    double tx_time = 0.01;      // t_tau seconds
    double train_time = 0.09;   // t_eps seconds
    double sample_scalars = 11.0;  // rho
    int bits_per_scalar = 32;
    int dataset_size = 1000;    // S
    int rb_budget = 4;          // B
    GammaSchedule gamma;
    int iteration_cap = 10000;

    void validate() const {
        if (!(share_ratio > 0.0) || share_ratio > 1.0)
            throw ContractViolation("CompletionParams: eta must be in (0, 1]");
        if (!(disc_error >= 0.0) || disc_error >= 1.0)
            throw ContractViolation("CompletionParams: epsilon must be in [0, 1)");
        if (in_degree < 0)
            throw ContractViolation("CompletionParams: in-degree must be >= 0");
        if (l_max < 1) throw ContractViolation("CompletionParams: l_max must be >= 1");
        if (l_loop_min < 2)
            throw ContractViolation("CompletionParams: l_loop_min must be >= 2");
        if (!(confidence > 0.0) || confidence >= 1.0)
            throw ContractViolation("CompletionParams: p_tau must be in (0, 1)");
        if (!(tx_time > 0.0) || !(train_time >= 0.0))
            throw ContractViolation("CompletionParams: bad stage times");
        if (!(sample_scalars > 0.0))
            throw ContractViolation("CompletionParams: rho must be positive");
        if (bits_per_scalar < 1 || dataset_size < 1 || rb_budget < 1)
            throw ContractViolation("CompletionParams: bad integer fields");
        if (iteration_cap < l_max)
            throw ContractViolation("CompletionParams: iteration cap below l_max");
        gamma.validate();
    }

    int regime_boundary() const { return l_max + l_loop_min - 1; }  // T0
};

/// gamma(T) for the configured schedule; 1 for T <= T0.
inline double gamma_value(const CompletionParams& params, int T) {
    const int T0 = params.regime_boundary();
    if (T <= T0) return 1.0;
    const double d = 1.0 + params.in_degree * params.share_ratio;
    if (d <= 1.0) return 1.0;
    const GammaSchedule& g = params.gamma;
    if (g.kind == GammaSchedule::Kind::kSaturating) {
        return 1.0 + params.in_degree * params.share_ratio *
                         (1.0 - std::pow(g.saturating_decay, T - T0));
    }
    const double q = (1.0 - params.disc_error) * params.share_ratio;
    double mass = 0.0;  // total extra exponent so p_in levels off at the target
    if (q > 0.0) {
        mass = std::max(0.0, T0 - 1 + (std::log(g.target_hazard) -
                                       params.l_max * std::log(q)) /
                                          std::log(d));
    }
    const int m = T - T0;
    const double exponent =
        1.0 + mass * (1.0 - g.hazard_decay) * std::pow(g.hazard_decay, m - 1);
    return std::pow(d, exponent);
}

struct CompletionCurve {
    std::vector<double> probability;  // index T = 0..cap
    std::vector<bool> clamped;        // diagnostic: accumulation exceeded 1
};

/// Full p_G(T) curve for T = 0..t_max, piecewise:
/// zero below l_max, a single-delivery term at l_max, chain-rule accumulation
/// up to the loop onset, then the gamma-augmented accumulation restarted at
/// the regime boundary. Values are clamped into [0, 1] with a diagnostic.
inline CompletionCurve completion_curve(const CompletionParams& params, int t_max) {
    params.validate();
    if (t_max < 0) throw ContractViolation("completion_curve: t_max must be >= 0");
    const double q = (1.0 - params.disc_error) * params.share_ratio;
    const double d = 1.0 + params.in_degree * params.share_ratio;
    const int lm = params.l_max;
    const int onset = lm + params.l_loop_min;  // first gamma-augmented iteration
    const int T0 = onset - 1;

    CompletionCurve out;
    out.probability.assign(static_cast<std::size_t>(t_max) + 1, 0.0);
    out.clamped.assign(static_cast<std::size_t>(t_max) + 1, false);
    if (lm > t_max || q <= 0.0) return out;

    const double q_lm = std::pow(q, lm);
    out.probability[static_cast<std::size_t>(lm)] = q_lm / std::pow(d, lm - 1);

    double failure = 1.0;
    for (int i = lm + 1; i <= std::min(t_max, onset - 1); ++i) {
        failure *= 1.0 - q_lm / std::pow(d, i - 2);
        out.probability[static_cast<std::size_t>(i)] =
            out.probability[static_cast<std::size_t>(i - 1)] +
            failure * q_lm / std::pow(d, i - 1);
    }

    if (t_max >= onset) {
        double raw = q_lm / std::pow(d, T0 - 1);  // p_in(T0); gamma(T0) = 1
        double pin_prev = std::min(raw, 1.0);
        failure = 1.0;
        double acc = out.probability[static_cast<std::size_t>(onset - 1)];
        bool clamped = false;
        for (int i = onset; i <= t_max; ++i) {
            raw *= gamma_value(params, i) / d;
            const double pin = std::min(raw, 1.0);
            failure *= 1.0 - pin_prev;
            acc += failure * pin;
            if (acc > 1.0) {
                acc = 1.0;
                clamped = true;
            }
            out.probability[static_cast<std::size_t>(i)] = acc;
            out.clamped[static_cast<std::size_t>(i)] = clamped;
            pin_prev = pin;
        }
    }
    return out;
}

struct CompletionProbability {
    double value = 0.0;
    bool clamped = false;
};

/// p_G(T): probability that every generator holds the network-wide
/// distribution after T iterations.
inline CompletionProbability completion_probability(int T,
                                                    const CompletionParams& params) {
    if (T < 0) throw ContractViolation("completion_probability: T must be >= 0");
    const auto curve = completion_curve(params, T);
    return {curve.probability[static_cast<std::size_t>(T)],
            curve.clamped[static_cast<std::size_t>(T)]};
}

/// Independent hop-recursion route for the gamma-free regime
/// (T < l_max + l_loop_min): per-hop transfer (1-eps)*eta, per-iteration
/// dilution 1/(1+N*eta), first-arrival accumulation by the chain rule.
inline double recursion_oracle(int T, const CompletionParams& params) {
    params.validate();
    if (T < 0) throw ContractViolation("recursion_oracle: T must be >= 0");
    if (T >= params.l_max + params.l_loop_min)
        throw RegimeError("recursion_oracle: T is inside the looped-flow regime");
    if (T < params.l_max) return 0.0;

    const double hop = (1.0 - params.disc_error) * params.share_ratio;
    const double dilution = 1.0 + params.in_degree * params.share_ratio;

    // straight-chain delivery probability after exactly l_max hops
    double p_in = hop;  // first hop
    for (int h = 2; h <= params.l_max; ++h) {
        const double p_out = p_in / dilution;
        p_in = hop * p_out;
    }

    // arrivals delayed past l_max pay one extra dilution per waiting iteration
    double accumulated = 0.0;
    double failure = 1.0;
    double arrival = p_in;
    for (int t = params.l_max; t <= T; ++t) {
        accumulated += failure * arrival;
        failure *= 1.0 - arrival;
        arrival /= dilution;
    }
    return accumulated;
}

struct RequiredIterations {
    int iterations = 0;       // T_G
    double probability = 0.0;  // p_G(T_G)
    bool clamped = false;
};

/// Smallest T with p_G(T-1) < p_tau <= p_G(T). Throws NonAttainmentError
/// carrying p_G(cap) when the cap is reached first.
inline RequiredIterations required_iterations(const CompletionParams& params) {
    params.validate();
    const auto curve = completion_curve(params, params.iteration_cap);
    for (int t = 0; t <= params.iteration_cap; ++t) {
        if (curve.probability[static_cast<std::size_t>(t)] >= params.confidence)
            return {t, curve.probability[static_cast<std::size_t>(t)],
                    curve.clamped[static_cast<std::size_t>(t)]};
    }
    throw NonAttainmentError(curve.probability.back());
}

/// Wall-clock completion time (t_tau + t_eps) * T_G.
inline double completion_time(const CompletionParams& params, int t_g) {
    if (t_g < 1) throw ContractViolation("completion_time: T_G must be >= 1");
    return (params.tx_time + params.train_time) * t_g;
}

/// Total exchanged traffic until completion.
struct CommLoad {
    double scalars = 0.0;        // T_G * eta * S * rho * B
    std::int64_t scalars_int = 0;  // exact when the factors are integral
    bool exact = false;
    double bits = 0.0;
};

inline CommLoad comm_load(const CompletionParams& params, int t_g) {
    if (t_g < 1) throw ContractViolation("comm_load: T_G must be >= 1");
    CommLoad load;
    load.scalars = static_cast<double>(t_g) * params.share_ratio *
                   params.dataset_size * params.sample_scalars * params.rb_budget;
    const double batch = params.share_ratio * params.dataset_size;
    const double rho = params.sample_scalars;
    if (std::abs(batch - std::llround(batch)) < 1e-9 &&
        std::abs(rho - std::llround(rho)) < 1e-9) {
        load.scalars_int = static_cast<std::int64_t>(t_g) * params.rb_budget *
                           std::llround(batch) * std::llround(rho);
        load.exact = true;
    }
    load.bits = load.scalars * params.bits_per_scalar;
    return load;
}

/// Analytic communication loads of the comparison schemes. The
/// two-directional scheme doubles the per-iteration sample traffic; the
/// parameter-averaging scheme ships whole model parameter vectors instead.
struct BaselineLoads {
    double proposed_scalars = 0.0;
    double proposed_bits = 0.0;
    double md_scalars = 0.0;  // two-directional exchange
    double md_bits = 0.0;
    double fl_params = 0.0;   // parameter-averaging traffic, parameter count
    double fl_bits = 0.0;
};

inline BaselineLoads baseline_loads(const CompletionParams& params,
                                    std::int64_t model_param_count, int t_g,
                                    int bits_per_parameter = 32) {
    if (model_param_count < 1)
        throw ContractViolation("baseline_loads: model_param_count must be >= 1");
    const CommLoad proposed = comm_load(params, t_g);
    BaselineLoads out;
    out.proposed_scalars = proposed.scalars;
    out.proposed_bits = proposed.bits;
    out.md_scalars = 2.0 * proposed.scalars;
    out.md_bits = 2.0 * proposed.bits;
    out.fl_params = static_cast<double>(t_g) * params.rb_budget *
                    static_cast<double>(model_param_count);
    out.fl_bits = out.fl_params * bits_per_parameter;
    return out;
}

}  // namespace uavgan
