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

// Test-only oracles, kept independent of the library's BFS-based paths.

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "uavgan/graph.hpp"
#include "uavgan/topology.hpp"

namespace uavgan_test {

inline constexpr int kInf = 1 << 20;

/// Floyd-Warshall all-pairs hop distances (independent of the BFS route).
inline std::vector<std::vector<int>> floyd_warshall(
    const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), kInf));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
    for (int u = 0; u < n; ++u)
        for (int v : adj[static_cast<std::size_t>(u)])
            d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::min(
                    d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                    d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                        d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
    return d;
}

inline int oracle_l_max(const std::vector<std::vector<int>>& adj) {
    auto d = floyd_warshall(adj);
    int worst = 0;
    for (std::size_t u = 0; u < adj.size(); ++u)
        for (std::size_t v = 0; v < adj.size(); ++v) {
            if (u == v) continue;
            if (d[u][v] >= kInf) return kInf;
            worst = std::max(worst, d[u][v]);
        }
    return worst;
}

/// Brute-force shortest cycle through `u` by DFS over simple paths.
inline int oracle_min_loop(const std::vector<std::vector<int>>& adj, int u) {
    const int n = static_cast<int>(adj.size());
    int best = kInf;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto dfs = [&](auto&& self, int at, int depth) -> void {
        if (depth >= best) return;
        for (int nxt : adj[static_cast<std::size_t>(at)]) {
            if (nxt == u) {
                best = std::min(best, depth + 1);
                continue;
            }
            if (!used[static_cast<std::size_t>(nxt)]) {
                used[static_cast<std::size_t>(nxt)] = true;
                self(self, nxt, depth + 1);
                used[static_cast<std::size_t>(nxt)] = false;
            }
        }
    };
    used[static_cast<std::size_t>(u)] = true;
    dfs(dfs, u, 0);
    return best;
}

/// All directed Hamiltonian cycles (as successor maps) within feasible sets.
inline std::vector<std::vector<int>> enumerate_rings(
    const std::vector<std::vector<int>>& feasible) {
    const int n = static_cast<int>(feasible.size());
    std::vector<std::vector<int>> found;
    std::vector<int> order{0};
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    used[0] = true;
    auto dfs = [&](auto&& self) -> void {
        if (static_cast<int>(order.size()) == n) {
            const auto& last = feasible[static_cast<std::size_t>(order.back())];
            if (std::find(last.begin(), last.end(), 0) != last.end()) {
                std::vector<int> next(static_cast<std::size_t>(n));
                for (int k = 0; k < n; ++k)
                    next[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
                        order[static_cast<std::size_t>((k + 1) % n)];
                found.push_back(next);
            }
            return;
        }
        for (int nxt : feasible[static_cast<std::size_t>(order.back())]) {
            if (used[static_cast<std::size_t>(nxt)]) continue;
            used[static_cast<std::size_t>(nxt)] = true;
            order.push_back(nxt);
            self(self);
            order.pop_back();
            used[static_cast<std::size_t>(nxt)] = false;
        }
    };
    dfs(dfs);
    return found;
}

/// Exhaustive optimum of the formation objective: over every choice of
/// exactly O_i out-neighbors per node (within feasible sets and power caps),
/// the smallest achievable global l_max. Returns nothing if no strongly
/// connected choice exists.
inline std::optional<int> brute_force_optimal_l_max(
    const std::vector<uavgan::UavNode>& nodes,
    const uavgan::ConstraintParams& params) {
    using namespace uavgan;
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<std::vector<int>>> families;
    for (int i = 0; i < n; ++i) {
        auto fam = extended_feasible_set(i, nodes, params,
                                         nodes[static_cast<std::size_t>(i)].out_budget);
        if (fam.empty()) return std::nullopt;
        families.push_back(std::move(fam));
    }
    std::optional<int> best;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    auto walk = [&](auto&& self, int i) -> void {
        if (i == n) {
            if (!uavgan::is_strongly_connected(adj)) return;
            const int lm = oracle_l_max(adj);
            if (!best || lm < *best) best = lm;
            return;
        }
        for (const auto& pick : families[static_cast<std::size_t>(i)]) {
            adj[static_cast<std::size_t>(i)] = pick;
            self(self, i + 1);
        }
        adj[static_cast<std::size_t>(i)].clear();
    };
    walk(walk, 0);
    return best;
}

/// Every edge set of size `edges` over n nodes (no self-loops), streamed to a
/// visitor as adjacency lists.
template <typename Visitor>
inline void enumerate_digraphs_with_edge_count(int n, int edges, Visitor&& visit) {
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) all.emplace_back(u, v);
    std::vector<int> pick;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(pick.size()) == edges) {
            std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
            for (int idx : pick)
                adj[static_cast<std::size_t>(all[static_cast<std::size_t>(idx)].first)]
                    .push_back(all[static_cast<std::size_t>(idx)].second);
            visit(adj);
            return;
        }
        for (std::size_t t = start; t < all.size(); ++t) {
            pick.push_back(static_cast<int>(t));
            self(self, t + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace uavgan_test
