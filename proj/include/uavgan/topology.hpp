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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/graph.hpp"
#include "uavgan/linkbudget.hpp"

namespace uavgan {

/// Link-layer constraints governing which exchange edges may exist.
struct ConstraintParams {
    double snr_threshold = 10.0;     // tau, linear
    double tx_time_limit = 0.01;     // t_tau, seconds
    double sample_scalars = 11.0;    // rho, scalars per exchanged sample
    int bits_per_scalar = 32;
    double share_ratio = 0.5;        // eta in (0, 1]
    int rb_budget = 4;               // B
    double bandwidth_hz = 2e6;       // w_b
    double noise_power_w = 7.9621434110699e-15;  // -174 dBm/Hz * 2 MHz
    double a2a_wavelength = kSpeedOfLight / 2.4e9;

    // Exact small-instance pass after the greedy trim: enumerated when the
    // product of per-node subset-family sizes stays under this cap. 0 disables.
    long refine_cap = 100000;

    void validate(int node_count) const {
        if (!(snr_threshold > 0.0)) throw ContractViolation("ConstraintParams: tau must be > 0");
        if (!(tx_time_limit > 0.0)) throw ContractViolation("ConstraintParams: t_tau must be > 0");
        if (!(sample_scalars > 0.0)) throw ContractViolation("ConstraintParams: rho must be > 0");
        if (bits_per_scalar < 1) throw ContractViolation("ConstraintParams: bits_per_scalar must be >= 1");
        if (!(share_ratio > 0.0) || share_ratio > 1.0)
            throw ContractViolation("ConstraintParams: eta must be in (0, 1]");
        if (rb_budget < node_count)
            throw ContractViolation("ConstraintParams: rb_budget must be >= node count");
        if (!(bandwidth_hz > 0.0) || !(noise_power_w > 0.0) || !(a2a_wavelength > 0.0))
            throw ContractViolation("ConstraintParams: bad physical-layer constants");
    }

    /// Bits node i must push per iteration divided by the time window.
    double required_rate_bps(const UavNode& sender) const {
        const double bits = share_ratio * sender.dataset_size * sample_scalars *
                            bits_per_scalar;
        return bits / tx_time_limit;
    }
};

/// Budget of the directed pair (i, j) at the minimum power meeting both the
/// SNR floor and the transmission-time limit.
inline LinkBudget pair_budget(const std::vector<UavNode>& nodes, int i, int j,
                              const ConstraintParams& params) {
    const double d = distance(nodes[static_cast<std::size_t>(i)].position,
                              nodes[static_cast<std::size_t>(j)].position);
    return make_link_budget(i, j, d, params.a2a_wavelength, params.noise_power_w,
                            params.bandwidth_hz, params.snr_threshold,
                            params.required_rate_bps(nodes[static_cast<std::size_t>(i)]));
}

/// All transmit powers from node i (index j; self entry is +inf).
inline std::vector<double> own_link_powers(const std::vector<UavNode>& nodes, int i,
                                           const ConstraintParams& params) {
    std::vector<double> p(nodes.size(), std::numeric_limits<double>::infinity());
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
        if (j == i) continue;
        p[static_cast<std::size_t>(j)] = pair_budget(nodes, i, j, params).tx_power_w;
    }
    return p;
}

/// Feasible destination set of node i: peers reachable within the power cap
/// while meeting the SNR and transmission-time constraints.
inline std::vector<int> feasible_set(int i, const std::vector<UavNode>& nodes,
                                     const ConstraintParams& params) {
    std::vector<int> out;
    const auto powers = own_link_powers(nodes, i, params);
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
        if (j == i) continue;
        if (powers[static_cast<std::size_t>(j)] <=
            nodes[static_cast<std::size_t>(i)].max_power_w)
            out.push_back(j);
    }
    return out;
}

/// Family of out-neighbor subsets of size `out_budget` whose summed powers fit
/// under the node's cap. Every member set individually satisfies the SNR and
/// time constraints by construction of the feasible set.
inline std::vector<std::vector<int>> extended_feasible_set(
    int i, const std::vector<UavNode>& nodes, const ConstraintParams& params,
    int out_budget) {
    if (out_budget < 1)
        throw ContractViolation("extended_feasible_set: out_budget must be >= 1");
    const auto base = feasible_set(i, nodes, params);
    const auto powers = own_link_powers(nodes, i, params);
    std::vector<std::vector<int>> family;
    if (out_budget > static_cast<int>(base.size())) return family;

    std::vector<int> pick;
    const double cap = nodes[static_cast<std::size_t>(i)].max_power_w;
    auto recurse = [&](auto&& self, std::size_t start, double sum) -> void {
        if (static_cast<int>(pick.size()) == out_budget) {
            family.push_back(pick);
            return;
        }
        for (std::size_t t = start; t < base.size(); ++t) {
            const double p = powers[static_cast<std::size_t>(base[t])];
            if (sum + p > cap) continue;
            pick.push_back(base[t]);
            self(self, t + 1, sum + p);
            pick.pop_back();
        }
    };
    recurse(recurse, 0, 0.0);
    return family;
}

/// Existence precondition for any feasible exchange structure: every node has
/// somewhere to send, and every node is somebody's feasible destination.
struct NecessaryConditionReport {
    bool ok = false;
    std::vector<int> empty_feasible;  // nodes with no feasible destination
    std::vector<int> uncovered;       // nodes in nobody's feasible set
};

inline NecessaryConditionReport check_necessary_condition(
    const std::vector<UavNode>& nodes, const ConstraintParams& params) {
    const int n = static_cast<int>(nodes.size());
    NecessaryConditionReport rep;
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const auto ji = feasible_set(i, nodes, params);
        if (ji.empty()) rep.empty_feasible.push_back(i);
        for (int j : ji) covered[static_cast<std::size_t>(j)] = true;
    }
    for (int j = 0; j < n; ++j)
        if (!covered[static_cast<std::size_t>(j)]) rep.uncovered.push_back(j);
    rep.ok = rep.empty_feasible.empty() && rep.uncovered.empty();
    return rep;
}

struct InfeasibilityReport {
    std::string reason;
    std::vector<int> offending_nodes;
};

namespace detail {

/// Deterministic Hamiltonian-cycle search over per-node admissible successor
/// sets; successors tried in ascending id. Returns the cycle as next[] or
/// nothing.
inline std::optional<std::vector<int>> hamiltonian_cycle(
    const std::vector<std::vector<int>>& admissible) {
    const int n = static_cast<int>(admissible.size());
    if (n < 2) return std::nullopt;
    std::vector<int> order{0};
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    used[0] = true;
    auto dfs = [&](auto&& self) -> bool {
        if (static_cast<int>(order.size()) == n) {
            const auto& last = admissible[static_cast<std::size_t>(order.back())];
            return std::binary_search(last.begin(), last.end(), 0);
        }
        for (int nxt : admissible[static_cast<std::size_t>(order.back())]) {
            if (used[static_cast<std::size_t>(nxt)]) continue;
            used[static_cast<std::size_t>(nxt)] = true;
            order.push_back(nxt);
            if (self(self)) return true;
            order.pop_back();
            used[static_cast<std::size_t>(nxt)] = false;
        }
        return false;
    };
    if (!dfs(dfs)) return std::nullopt;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        next[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
            order[static_cast<std::size_t>((k + 1) % n)];
    return next;
}

/// Cheapest way to keep `must_keep` plus (budget-1) other destinations from
/// `pool` under the power cap.
inline bool power_subset_exists(const std::vector<int>& pool,
                                const std::vector<double>& powers, int must_keep,
                                int budget, double cap) {
    double sum = powers[static_cast<std::size_t>(must_keep)];
    std::vector<double> rest;
    for (int j : pool)
        if (j != must_keep) rest.push_back(powers[static_cast<std::size_t>(j)]);
    if (static_cast<int>(rest.size()) < budget - 1) return false;
    std::sort(rest.begin(), rest.end());
    for (int t = 0; t < budget - 1; ++t) sum += rest[static_cast<std::size_t>(t)];
    return sum <= cap;
}

}  // namespace detail

struct RingResult {
    std::optional<UavGraph> graph;
    std::vector<int> next;  // successor per node when ok
    InfeasibilityReport report;

    bool ok() const { return graph.has_value(); }
};

/// Directed Hamiltonian cycle where every edge stays inside the sender's
/// feasible set. The nodes must relocate when none exists.
inline RingResult build_ring(const std::vector<UavNode>& nodes,
                             const std::vector<std::vector<int>>& feasible_sets,
                             const ConstraintParams& params) {
    RingResult res;
    auto cycle = detail::hamiltonian_cycle(feasible_sets);
    if (!cycle) {
        res.report.reason = "no directed ring exists within the feasible sets; "
                            "nodes must relocate";
        return res;
    }
    res.next = *cycle;
    std::vector<LinkBudget> edges;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        edges.push_back(pair_budget(nodes, i, res.next[static_cast<std::size_t>(i)], params));
    res.graph = UavGraph::from_edges(nodes, std::move(edges));
    return res;
}

/// What every node shares before and during formation: feasible sets, ring
/// successors usable under each node's power budget, and the evolving
/// out-neighbor sets. Removal decisions may read nothing else besides the
/// deciding node's own link powers.
struct FormationBroadcast {
    std::vector<std::vector<int>> feasible_sets;   // J_i, sorted
    std::vector<std::vector<int>> ring_admissible; // successors i can anchor
    std::vector<int> out_budgets;                  // O_i
    std::vector<int> ring_next;                    // chosen spanning ring
    std::vector<std::vector<int>> out_sets;        // current out-neighbors
};

/// One node's surplus-trimming decision: pick the out-edge whose removal
/// keeps l_i^max smallest, never touching the ring successor and never
/// stranding the power-feasible subset. Ties go to the largest destination.
inline std::optional<int> formation_removal_choice(
    int i, const std::vector<double>& own_powers, double own_max_power,
    const FormationBroadcast& bs) {
    const auto& mine = bs.out_sets[static_cast<std::size_t>(i)];
    const int budget = bs.out_budgets[static_cast<std::size_t>(i)];
    if (static_cast<int>(mine.size()) <= budget) return std::nullopt;
    const int keep = bs.ring_next[static_cast<std::size_t>(i)];

    std::optional<int> best;
    int best_cost = kUnreachable;
    for (int j : mine) {
        if (j == keep) continue;
        std::vector<int> rest;
        for (int t : mine)
            if (t != j) rest.push_back(t);
        if (!detail::power_subset_exists(rest, own_powers, keep, budget,
                                         own_max_power))
            continue;
        auto adj = bs.out_sets;
        adj[static_cast<std::size_t>(i)] = rest;
        const int cost = max_shortest_path_from(adj, i);
        if (cost < best_cost || (cost == best_cost && best && j > *best)) {
            best_cost = cost;
            best = j;
        }
    }
    return best;
}

struct FormationResult {
    std::optional<UavGraph> graph;
    std::vector<int> ring_next;
    InfeasibilityReport report;
    bool refined = false;  // the exact small-instance pass improved the trim

    bool ok() const { return graph.has_value(); }
};

namespace detail {

/// Exhaustive search over the broadcast subset-families: the shortest global
/// diameter any out-neighbor assignment can reach. Among equal-diameter
/// assignments, spanning-ring-containing ones win, then the lexicographically
/// first. Everything consumed here is broadcast, so each node reproduces the
/// same answer.
struct ExactAssignment {
    int l_max = kUnreachable;
    std::vector<std::vector<int>> out_sets;
    std::vector<int> ring_next;
};

inline std::optional<ExactAssignment> exact_assignment_search(
    const std::vector<std::vector<std::vector<int>>>& families, long cap) {
    const int n = static_cast<int>(families.size());
    long combos = 1;
    for (const auto& f : families) {
        if (f.empty()) return std::nullopt;
        combos *= static_cast<long>(f.size());
        if (combos > cap) return std::nullopt;
    }
    ExactAssignment best;
    bool best_has_ring = false;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    std::vector<int> best_ring;
    auto consider = [&]() {
        if (!is_strongly_connected(adj)) return;
        int lm = 0;
        for (int u = 0; u < n && lm != kUnreachable; ++u)
            lm = std::max(lm, max_shortest_path_from(adj, u));
        if (lm > best.l_max) return;
        auto ring = hamiltonian_cycle(adj);
        const bool has_ring = ring.has_value();
        if (lm < best.l_max || (lm == best.l_max && has_ring && !best_has_ring)) {
            best.l_max = lm;
            best.out_sets = adj;
            best_has_ring = has_ring;
            if (has_ring) best.ring_next = *ring;
        }
    };
    auto walk = [&](auto&& self, int i) -> void {
        if (i == n) {
            consider();
            return;
        }
        for (const auto& pick : families[static_cast<std::size_t>(i)]) {
            adj[static_cast<std::size_t>(i)] = pick;
            self(self, i + 1);
        }
    };
    walk(walk, 0);
    if (best.l_max == kUnreachable) return std::nullopt;
    return best;
}

}  // namespace detail

/// Distributed network formation: broadcast feasible sets, agree on a spanning
/// ring, start from the dense feasible graph and trim surplus out-edges
/// round-robin until every node holds exactly its out-degree budget.
inline FormationResult network_formation(const std::vector<UavNode>& nodes,
                                         const ConstraintParams& params) {
    const int n = static_cast<int>(nodes.size());
    FormationResult res;
    if (n < 2) {
        res.report.reason = "formation needs at least two nodes";
        return res;
    }
    params.validate(n);
    long total_budget = 0;
    for (const auto& node : nodes) {
        node.validate();
        total_budget += node.out_budget;
    }
    if (total_budget > params.rb_budget) {
        res.report.reason = "sum of out-degree budgets exceeds the RB budget";
        return res;
    }

    FormationBroadcast bs;
    bs.out_budgets.resize(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> powers(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bs.out_budgets[static_cast<std::size_t>(i)] =
            nodes[static_cast<std::size_t>(i)].out_budget;
        powers[static_cast<std::size_t>(i)] = own_link_powers(nodes, i, params);
        bs.feasible_sets.push_back(feasible_set(i, nodes, params));
    }

    const auto nec = check_necessary_condition(nodes, params);
    if (!nec.ok) {
        res.report.reason = "necessary condition fails: some node has an empty "
                            "feasible set or is covered by nobody";
        res.report.offending_nodes = nec.empty_feasible;
        res.report.offending_nodes.insert(res.report.offending_nodes.end(),
                                          nec.uncovered.begin(), nec.uncovered.end());
        return res;
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(bs.feasible_sets[static_cast<std::size_t>(i)].size()) <
            nodes[static_cast<std::size_t>(i)].out_budget) {
            res.report.reason = "feasible set smaller than the out-degree budget";
            res.report.offending_nodes.push_back(i);
        }
    }
    if (!res.report.reason.empty()) return res;

    // ring anchors each node can afford alongside its cheapest other edges
    for (int i = 0; i < n; ++i) {
        std::vector<int> adm;
        for (int j : bs.feasible_sets[static_cast<std::size_t>(i)]) {
            if (detail::power_subset_exists(
                    bs.feasible_sets[static_cast<std::size_t>(i)],
                    powers[static_cast<std::size_t>(i)], j,
                    nodes[static_cast<std::size_t>(i)].out_budget,
                    nodes[static_cast<std::size_t>(i)].max_power_w))
                adm.push_back(j);
        }
        if (adm.empty()) {
            res.report.reason = "no power-feasible out-neighbor subset exists";
            res.report.offending_nodes.push_back(i);
            return res;
        }
        bs.ring_admissible.push_back(std::move(adm));
    }

    auto ring = detail::hamiltonian_cycle(bs.ring_admissible);
    if (!ring) {
        res.report.reason = "no spanning ring fits the feasible sets and power "
                            "budgets; nodes must relocate";
        return res;
    }
    bs.ring_next = *ring;
    res.ring_next = *ring;

    bs.out_sets = bs.feasible_sets;  // dense start
    bool surplus = true;
    while (surplus) {
        surplus = false;
        bool removed_any = false;
        for (int i = 0; i < n; ++i) {
            auto& mine = bs.out_sets[static_cast<std::size_t>(i)];
            if (static_cast<int>(mine.size()) <=
                bs.out_budgets[static_cast<std::size_t>(i)])
                continue;
            surplus = true;
            auto choice = formation_removal_choice(
                i, powers[static_cast<std::size_t>(i)],
                nodes[static_cast<std::size_t>(i)].max_power_w, bs);
            if (!choice) continue;
            mine.erase(std::find(mine.begin(), mine.end(), *choice));
            removed_any = true;
            if (static_cast<int>(mine.size()) >
                bs.out_budgets[static_cast<std::size_t>(i)])
                surplus = true;
        }
        if (surplus && !removed_any) {
            res.report.reason = "formation stalled: surplus edges remain but none "
                                "is removable";
            return res;
        }
        surplus = false;
        for (int i = 0; i < n; ++i)
            if (static_cast<int>(bs.out_sets[static_cast<std::size_t>(i)].size()) >
                bs.out_budgets[static_cast<std::size_t>(i)])
                surplus = true;
    }

    // exact pass on small instances: the greedy trim is myopic (each node
    // watches only its own eccentricity) and can land one hop off the best
    // reachable diameter
    if (params.refine_cap > 0) {
        int greedy_lmax = 0;
        for (int u = 0; u < n && greedy_lmax != kUnreachable; ++u)
            greedy_lmax = std::max(greedy_lmax, max_shortest_path_from(bs.out_sets, u));
        std::vector<std::vector<std::vector<int>>> families;
        families.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            families.push_back(extended_feasible_set(
                i, nodes, params, nodes[static_cast<std::size_t>(i)].out_budget));
        auto exact = detail::exact_assignment_search(families, params.refine_cap);
        if (exact && exact->l_max < greedy_lmax) {
            bs.out_sets = exact->out_sets;
            if (!exact->ring_next.empty()) res.ring_next = exact->ring_next;
            res.refined = true;
        }
    }

    std::vector<LinkBudget> edges;
    for (int i = 0; i < n; ++i)
        for (int j : bs.out_sets[static_cast<std::size_t>(i)])
            edges.push_back(pair_budget(nodes, i, j, params));
    res.graph = UavGraph::from_edges(nodes, std::move(edges));
    return res;
}

/// Post-formation audit of every formation constraint. Throws on violation.
inline void audit_formation(const UavGraph& g, const ConstraintParams& params) {
    const int n = g.node_count();
    if (g.edge_count() > params.rb_budget)
        throw ContractViolation("audit: edge count exceeds RB budget");
    if (g.edge_count() < n)
        throw ContractViolation("audit: fewer edges than nodes");
    if (!is_strongly_connected(g.out))
        throw ContractViolation("audit: graph not strongly connected");
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : g.edges) {
        e.audit();
        if (e.snr + 1e-12 < params.snr_threshold)
            throw ContractViolation("audit: edge below the SNR threshold");
        const double tx_time =
            params.share_ratio *
            g.nodes[static_cast<std::size_t>(e.src)].dataset_size *
            params.sample_scalars * params.bits_per_scalar / e.rate_bps;
        if (tx_time > params.tx_time_limit * (1.0 + 1e-9))
            throw ContractViolation("audit: edge exceeds the transmission-time limit");
        sum[static_cast<std::size_t>(e.src)] += e.tx_power_w;
    }
    for (int i = 0; i < n; ++i) {
        if (sum[static_cast<std::size_t>(i)] >
            g.nodes[static_cast<std::size_t>(i)].max_power_w * (1.0 + 1e-9))
            throw ContractViolation("audit: per-node power budget exceeded");
        if (g.out_degree(i) != g.nodes[static_cast<std::size_t>(i)].out_budget)
            throw ContractViolation("audit: out-degree differs from the budget");
    }
}

}  // namespace uavgan
