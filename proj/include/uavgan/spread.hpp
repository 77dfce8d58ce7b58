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

#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/completion.hpp"
#include "uavgan/graph.hpp"

namespace uavgan {

/// Empirical first-delivery curve with standard errors.
struct SpreadCurve {
    std::vector<double> probability;  // index T = 0..t_max, P(delivered by T)
    std::vector<double> stderr_;      // sqrt(p(1-p)/trials)
    int trials = 0;
    int source = 0;       // witness pair used for the farthest route
    int destination = 0;
    int hops = 0;         // shortest-path length between them
};

/// Stochastic information-spread oracle over an actual topology.
///
/// A tagged unit of the source's channel information is re-emitted every
/// iteration. Each emitted wave must survive one dilution draw 1/(1+N*eta)
/// per iteration already spent in the source pool, then per hop along the
/// shortest route toward the farthest node: transfer succeeds with
/// probability (1-eps)*eta and every intermediate stop costs one further
/// dilution draw. The trial completes at the first wave that arrives.
///
/// Trials are independent with per-trial derived seeds, so the curve is
/// identical under any execution order.
inline SpreadCurve spread_simulator(const UavGraph& graph,
                                    const CompletionParams& params, int trials,
                                    std::uint64_t seed, int t_max = 64) {
    params.validate();
    if (trials < 1) throw ContractViolation("spread_simulator: trials must be >= 1");
    if (t_max < 1) throw ContractViolation("spread_simulator: t_max must be >= 1");
    if (!is_strongly_connected(graph.out))
        throw ContractViolation("spread_simulator: graph must be strongly connected");

    const auto msp = max_shortest_path(graph);
    const int hops = msp.length;
    const double hop_p = (1.0 - params.disc_error) * params.share_ratio;
    const double survive_p = 1.0 / (1.0 + params.in_degree * params.share_ratio);

    std::vector<std::int64_t> delivered_by(static_cast<std::size_t>(t_max) + 1, 0);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, "spread-trial", static_cast<std::uint64_t>(trial)));
        int done_at = -1;
        for (int launch = 1; launch + hops - 1 <= t_max && done_at < 0; ++launch) {
            bool alive = true;
            for (int wait = 1; wait < launch && alive; ++wait)
                alive = rng.bernoulli(survive_p);
            for (int h = 1; h <= hops && alive; ++h) {
                alive = rng.bernoulli(hop_p);
                if (alive && h < hops) alive = rng.bernoulli(survive_p);
            }
            if (alive) done_at = launch + hops - 1;
        }
        if (done_at >= 0)
            for (int t = done_at; t <= t_max; ++t)
                ++delivered_by[static_cast<std::size_t>(t)];
    }

    SpreadCurve out;
    out.trials = trials;
    out.source = msp.witness_src;
    out.destination = msp.witness_dst;
    out.hops = hops;
    out.probability.resize(static_cast<std::size_t>(t_max) + 1);
    out.stderr_.resize(static_cast<std::size_t>(t_max) + 1);
    for (int t = 0; t <= t_max; ++t) {
        const double p = static_cast<double>(delivered_by[static_cast<std::size_t>(t)]) /
                         trials;
        out.probability[static_cast<std::size_t>(t)] = p;
        out.stderr_[static_cast<std::size_t>(t)] =
            std::sqrt(std::max(p * (1.0 - p), 0.0) / trials);
    }
    return out;
}

}  // namespace uavgan
