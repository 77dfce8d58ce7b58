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

#include <cmath>
#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/graph.hpp"
#include "uavgan/histogram.hpp"

namespace uavgan {

/// Desk-scale generator: an empirical distribution over the discretized
/// sample space, together with the absorbed sample mass behind it. Stands in
/// for a generator network behind the same exchange interface.
struct GenerativeModel {
    SparseDist table;        // normalized, total mass 1
    double absorbed_mass = 0.0;  // samples the table currently represents

    static GenerativeModel from_dataset(const BinGrid& grid, const Dataset& ds) {
        GenerativeModel m;
        m.table = empirical_distribution(grid, ds);
        m.absorbed_mass = ds.size();
        return m;
    }
};

/// Density-ratio table D(s|phi_k) = mix / (mix + generated); 0.5 where a bin
/// was never scored.
struct Discriminator {
    std::unordered_map<BinKey, double, BinKeyHash> table;
    double training_error = 0.0;  // epsilon the owner trains at

    double evaluate(const BinKey& k) const {
        auto it = table.find(k);
        return it == table.end() ? 0.5 : it->second;
    }

    double mean_on_support() const {
        if (table.empty()) return 0.5;
        double s = 0.0;
        for (const auto& [k, v] : table) s += v;
        return s / static_cast<double>(table.size());
    }
};

/// Convex weights of the local pool and each in-neighbor batch.
struct MixtureWeights {
    double self_weight = 1.0;               // pi_i
    std::vector<double> neighbor_weights;   // pi_ij, aligned with the input order

    double sum() const {
        double s = self_weight;
        for (double v : neighbor_weights) s += v;
        return s;
    }
};

/// pi_i = S_i / (S_i + eta * sum S_j), pi_ij = eta * S_j / (same).
inline MixtureWeights mixture_weights(double own_size,
                                      const std::vector<double>& neighbor_sizes,
                                      double share_ratio) {
    if (!(own_size >= 1.0))
        throw ContractViolation("mixture_weights: own size must be >= 1");
    if (!(share_ratio >= 0.0) || share_ratio > 1.0)
        throw ContractViolation("mixture_weights: eta must be in [0, 1]");
    double denom = own_size;
    for (double s : neighbor_sizes) {
        if (!(s >= 1.0))
            throw ContractViolation("mixture_weights: neighbor size must be >= 1");
        denom += share_ratio * s;
    }
    MixtureWeights w;
    w.self_weight = own_size / denom;
    w.neighbor_weights.reserve(neighbor_sizes.size());
    for (double s : neighbor_sizes)
        w.neighbor_weights.push_back(share_ratio * s / denom);
    return w;
}

/// f^b = pi_i * local + sum_j pi_ij * neighbor_j. All inputs must be
/// normalized distributions on the same grid.
inline SparseDist mixture_distribution(const SparseDist& local,
                                       const std::vector<SparseDist>& neighbors,
                                       const MixtureWeights& weights) {
    if (neighbors.size() != weights.neighbor_weights.size())
        throw ContractViolation("mixture_distribution: weight count mismatch");
    SparseDist out;
    out.add_scaled(local, weights.self_weight);
    for (std::size_t j = 0; j < neighbors.size(); ++j)
        out.add_scaled(neighbors[j], weights.neighbor_weights[j]);
    return out;
}

/// Emitted per-iteration batch: `count` sample-mass of the sender's model.
/// Each sample is, with probability epsilon, resampled uniformly over the
/// model's occupied bins: a generated sample that stops following the data
/// distribution but still lands in the sample space the discriminator sees.
struct Batch {
    SparseDist weights;  // total mass == count
    int count = 0;
};

inline Batch emit_batch(const GenerativeModel& model, int count, double disc_error,
                        Rng& rng) {
    if (count < 0) throw ContractViolation("emit_batch: count must be >= 0");
    Batch b;
    b.count = count;
    if (count == 0) return b;
    int corrupted = 0;
    for (int s = 0; s < count; ++s)
        if (rng.bernoulli(disc_error)) ++corrupted;
    const double clean_mass = static_cast<double>(count - corrupted);
    b.weights.add_scaled(model.table, clean_mass);
    if (corrupted > 0) {
        std::vector<BinKey> keys;
        keys.reserve(model.table.w.size());
        for (const auto& [k, v] : model.table.w) keys.push_back(k);
        std::sort(keys.begin(), keys.end(), [](const BinKey& a, const BinKey& c) {
            if (a.cond != c.cond) return a.cond < c.cond;
            return a.axis < c.axis;
        });
        for (int s = 0; s < corrupted; ++s)
            b.weights.add(keys[rng.uniform_index(keys.size())], 1.0);
    }
    return b;
}

struct LearningParams {
    double share_ratio = 0.5;  // eta
    double disc_error = 0.1;   // epsilon
    int minibatch = 128;       // u: conditions refreshed per round
    int conditions = 81;       // K
    double log_floor = 1e-9;   // epsilon_floor before any log/ratio
    std::uint64_t seed = 1;

    void validate() const {
        if (!(share_ratio >= 0.0) || share_ratio > 1.0)
            throw ContractViolation("LearningParams: eta must be in [0, 1]");
        if (!(disc_error >= 0.0) || disc_error >= 1.0)
            throw ContractViolation("LearningParams: epsilon must be in [0, 1)");
        if (minibatch < 1) throw ContractViolation("LearningParams: u must be >= 1");
        if (conditions < 1) throw ContractViolation("LearningParams: K must be >= 1");
        if (!(log_floor > 0.0) || log_floor >= 0.5)
            throw ContractViolation("LearningParams: bad log floor");
    }
};

/// Per-UAV protocol state. The local empirical distribution is fixed; the
/// generator pool absorbs neighbor batches across rounds.
struct UavLearningState {
    int id = 0;
    int dataset_size = 0;        // S_i: fixed per-iteration emission volume
    SparseDist local;            // empirical distribution of the raw dataset
    GenerativeModel generator;
    Discriminator discriminator;
    SparseDist round_mixture;    // f^b of the latest round
    long iterations = 0;

    static UavLearningState init(const BinGrid& grid, const Dataset& ds,
                                 double disc_error) {
        UavLearningState st;
        st.id = ds.owner_id;
        st.dataset_size = ds.size();
        st.local = empirical_distribution(grid, ds);
        st.generator = GenerativeModel::from_dataset(grid, ds);
        st.discriminator.training_error = disc_error;
        st.round_mixture = st.generator.table;
        return st;
    }
};

/// One synchronous exchange round over the formed graph.
///
/// Every UAV emits round(eta * S_i) generated samples to each out-neighbor
/// (computed from the pre-round states, then delivered), ingests its
/// in-neighbor batches, refreshes the discriminator to the density ratio of
/// the ingested mixture against its own generator on the u conditions drawn
/// this round, and folds the batches into its generator pool. The pool
/// weighting makes the generator step toward the round mixture with a step
/// size that shrinks as evidence accumulates.
inline void train_iteration(std::vector<UavLearningState>& states,
                            const UavGraph& graph, const LearningParams& params,
                            long round_index) {
    params.validate();
    const int n = graph.node_count();
    if (static_cast<int>(states.size()) != n)
        throw ContractViolation("train_iteration: state/graph size mismatch");
    if (!is_strongly_connected(graph.out) && params.share_ratio > 0.0)
        throw ContractViolation("train_iteration: graph must be formed and strongly connected");

    // emissions from pre-round states (double-buffered round)
    std::vector<std::vector<Batch>> inbox(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int volume = static_cast<int>(
            std::llround(params.share_ratio * states[static_cast<std::size_t>(i)].dataset_size));
        for (int o : graph.out[static_cast<std::size_t>(i)]) {
            Rng rng(derive_seed(params.seed, "emit",
                                (static_cast<std::uint64_t>(round_index) << 20) ^
                                    (static_cast<std::uint64_t>(i) << 10) ^
                                    static_cast<std::uint64_t>(o)));
            inbox[static_cast<std::size_t>(o)].push_back(
                emit_batch(states[static_cast<std::size_t>(i)].generator, volume,
                           params.disc_error, rng));
        }
    }

    for (int i = 0; i < n; ++i) {
        auto& st = states[static_cast<std::size_t>(i)];
        const auto& batches = inbox[static_cast<std::size_t>(i)];

        double incoming_mass = 0.0;
        for (const auto& b : batches) incoming_mass += b.weights.mass();

        // round mixture: absorbed pool vs fresh batches
        SparseDist mix = st.generator.table;
        mix.scale(st.generator.absorbed_mass);
        for (const auto& b : batches) mix.add_scaled(b.weights, 1.0);
        if (st.generator.absorbed_mass + incoming_mass > 0.0)
            mix.scale(1.0 / (st.generator.absorbed_mass + incoming_mass));
        st.round_mixture = mix;

        // discriminator refresh on the conditions drawn this round
        Rng cond_rng(derive_seed(params.seed, "conditions",
                                 (static_cast<std::uint64_t>(round_index) << 20) ^
                                     static_cast<std::uint64_t>(i)));
        std::vector<bool> drawn(static_cast<std::size_t>(params.conditions) + 1, false);
        for (int t = 0; t < params.minibatch; ++t)
            drawn[cond_rng.uniform_index(static_cast<std::uint64_t>(params.conditions)) + 1] =
                true;
        auto refresh = [&](const BinKey& k) {
            if (!drawn[static_cast<std::size_t>(k.cond)]) return;
            const double real_side = mix.at(k);
            const double gen_side = st.generator.table.at(k);
            if (real_side + gen_side <= 0.0) return;
            st.discriminator.table[k] = real_side / (real_side + gen_side);
        };
        for (const auto& [k, v] : mix.w) refresh(k);
        for (const auto& [k, v] : st.generator.table.w) refresh(k);

        // generator pool absorbs the batches
        if (incoming_mass > 0.0) {
            st.generator.table = mix;
            st.generator.absorbed_mass += incoming_mass;
        }
        ++st.iterations;
    }
}

/// Adversarial value of one UAV's game, evaluated exactly from the tables:
/// (1/K) sum_k E_mix[ln D] + E_gen[ln(1 - D)], with D floored away from 0/1.
inline double value_function(const Discriminator& disc, const GenerativeModel& gen,
                             const SparseDist& mixture, int conditions,
                             double log_floor = 1e-9) {
    if (conditions < 1) throw ContractViolation("value_function: K must be >= 1");
    const auto mix_mass = mixture.condition_masses(conditions);
    const auto gen_mass = gen.table.condition_masses(conditions);
    std::vector<double> term(static_cast<std::size_t>(conditions) + 1, 0.0);
    auto clampd = [&](double v) {
        return std::min(std::max(v, log_floor), 1.0 - log_floor);
    };
    for (const auto& [k, v] : mixture.w) {
        if (k.cond < 1 || k.cond > conditions || mix_mass[static_cast<std::size_t>(k.cond)] <= 0.0)
            continue;
        term[static_cast<std::size_t>(k.cond)] +=
            v / mix_mass[static_cast<std::size_t>(k.cond)] *
            std::log(clampd(disc.evaluate(k)));
    }
    for (const auto& [k, v] : gen.table.w) {
        if (k.cond < 1 || k.cond > conditions || gen_mass[static_cast<std::size_t>(k.cond)] <= 0.0)
            continue;
        term[static_cast<std::size_t>(k.cond)] +=
            v / gen_mass[static_cast<std::size_t>(k.cond)] *
            std::log(clampd(1.0 - disc.evaluate(k)));
    }
    double total = 0.0;
    for (int k = 1; k <= conditions; ++k) total += term[static_cast<std::size_t>(k)];
    return total / conditions;
}

/// Network total utility: sum of the per-UAV values.
inline double total_utility(const std::vector<double>& per_uav_values) {
    double s = 0.0;
    for (double v : per_uav_values) s += v;
    return s;
}

/// Average divergence between each generator and the reference distribution,
/// (1/2I) sum_i sum_s [G_i ln(G_i/F) + F ln(F/G_i)], in nats. Note this is
/// the symmetrized KL, not the mixture-midpoint form the JSD name usually
/// denotes; the formula is kept as the reported accuracy metric defines it.
inline double jsd_metric(const std::vector<const SparseDist*>& generators,
                         const SparseDist& reference, double log_floor = 1e-9) {
    if (generators.empty()) throw ContractViolation("jsd_metric: no generators");
    double s = 0.0;
    for (const auto* g : generators) s += symmetric_kl(*g, reference, log_floor);
    return s / (2.0 * static_cast<double>(generators.size()));
}

struct EquilibriumRow {
    int id = 0;
    double jsd_to_mixture = 0.0;   // generator optimality: f^G vs f^b
    double disc_mean = 0.5;        // mean discriminator output on support
    double jsd_to_global = 0.0;    // network-wide equilibrium: f^G vs f
    double value = 0.0;            // V_i at the current tables
    bool generator_optimal = false;
    bool discriminator_half = false;
    bool network_equilibrium = false;
};

struct EquilibriumReport {
    std::vector<EquilibriumRow> rows;
    bool all_pass = false;
};

/// Reports how close each UAV sits to the exchange equilibrium: generator
/// matching its mixture, discriminator at one half, generator matching the
/// network-wide distribution.
inline EquilibriumReport equilibrium_check(const std::vector<UavLearningState>& states,
                                           const SparseDist& global,
                                           int conditions,
                                           double jsd_tolerance = 0.05,
                                           double disc_tolerance = 0.05,
                                           double log_floor = 1e-9) {
    EquilibriumReport rep;
    rep.all_pass = true;
    for (const auto& st : states) {
        EquilibriumRow row;
        row.id = st.id;
        row.jsd_to_mixture =
            symmetric_kl(st.generator.table, st.round_mixture, log_floor);
        row.disc_mean = st.discriminator.mean_on_support();
        row.jsd_to_global = symmetric_kl(st.generator.table, global, log_floor);
        row.value = value_function(st.discriminator, st.generator, st.round_mixture,
                                   conditions, log_floor);
        row.generator_optimal = row.jsd_to_mixture < jsd_tolerance;
        row.discriminator_half = std::abs(row.disc_mean - 0.5) < disc_tolerance;
        row.network_equilibrium = row.jsd_to_global < jsd_tolerance;
        rep.all_pass = rep.all_pass && row.generator_optimal &&
                       row.discriminator_half && row.network_equilibrium;
        rep.rows.push_back(row);
    }
    return rep;
}

/// Local-only reference learner: the generator is the raw empirical table.
inline GenerativeModel standalone_model(const BinGrid& grid, const Dataset& ds) {
    return GenerativeModel::from_dataset(grid, ds);
}

/// Raw-data-pooling reference learner.
inline GenerativeModel centralized_model(const BinGrid& grid,
                                         const std::vector<Dataset>& datasets) {
    if (datasets.empty())
        throw ContractViolation("centralized_model: no datasets");
    GenerativeModel m;
    double total = 0.0;
    for (const auto& ds : datasets) {
        m.table.add_scaled(empirical_distribution(grid, ds),
                           static_cast<double>(ds.size()));
        total += ds.size();
    }
    m.table.scale(1.0 / total);
    m.absorbed_mass = total;
    return m;
}

}  // namespace uavgan
