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

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "uavgan/common.hpp"
#include "uavgan/linkbudget.hpp"

namespace uavgan {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// One exchange participant: position for link budgets, dataset size for
/// transmission volumes, power cap and out-degree budget for formation.
struct UavNode {
    int id = 0;
    Vec3 position;
    int dataset_size = 1;   // S_i
    double max_power_w = 10.0;  // P_max
    int out_budget = 1;     // O_i

    void validate() const {
        if (out_budget < 1) throw ContractViolation("UavNode: out_budget must be >= 1");
        if (dataset_size < 1) throw ContractViolation("UavNode: dataset_size must be >= 1");
    }
};

/// Directed exchange topology with per-edge link budgets. Node ids are the
/// indices 0..I-1. Immutable by convention once formation completes.
struct UavGraph {
    std::vector<UavNode> nodes;
    std::vector<std::vector<int>> out;   // adjacency: out[i] = sorted dst ids
    std::vector<std::vector<int>> in;    // reverse adjacency
    std::vector<LinkBudget> edges;       // one entry per directed edge

    int node_count() const { return static_cast<int>(nodes.size()); }

    int edge_count() const { return static_cast<int>(edges.size()); }

    bool has_edge(int src, int dst) const {
        const auto& v = out[static_cast<std::size_t>(src)];
        return std::binary_search(v.begin(), v.end(), dst);
    }

    const LinkBudget* find_budget(int src, int dst) const {
        for (const auto& e : edges)
            if (e.src == src && e.dst == dst) return &e;
        return nullptr;
    }

    int out_degree(int i) const { return static_cast<int>(out[static_cast<std::size_t>(i)].size()); }
    int in_degree(int i) const { return static_cast<int>(in[static_cast<std::size_t>(i)].size()); }

    static UavGraph from_edges(std::vector<UavNode> nodes,
                               std::vector<LinkBudget> edges) {
        UavGraph g;
        g.nodes = std::move(nodes);
        const auto n = g.nodes.size();
        g.out.assign(n, {});
        g.in.assign(n, {});
        for (auto& e : edges) {
            if (e.src < 0 || e.dst < 0 || e.src >= static_cast<int>(n) ||
                e.dst >= static_cast<int>(n))
                throw ContractViolation("UavGraph: edge endpoint out of range");
            if (e.src == e.dst)
                throw ContractViolation("UavGraph: self-loops are not allowed");
            g.out[static_cast<std::size_t>(e.src)].push_back(e.dst);
            g.in[static_cast<std::size_t>(e.dst)].push_back(e.src);
        }
        for (auto& v : g.out) std::sort(v.begin(), v.end());
        for (auto& v : g.in) std::sort(v.begin(), v.end());
        g.edges = std::move(edges);
        return g;
    }
};

/// BFS hop distances from `src` over an adjacency list; kUnreachable where
/// no path exists.
inline std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj,
                                      int src) {
    std::vector<int> dist(adj.size(), kUnreachable);
    dist[static_cast<std::size_t>(src)] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] == kUnreachable) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

inline bool is_strongly_connected(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return false;
    auto d = bfs_distances(adj, 0);
    for (int v = 0; v < n; ++v)
        if (d[static_cast<std::size_t>(v)] == kUnreachable) return false;
    std::vector<std::vector<int>> rev(adj.size());
    for (int u = 0; u < n; ++u)
        for (int v : adj[static_cast<std::size_t>(u)])
            rev[static_cast<std::size_t>(v)].push_back(u);
    d = bfs_distances(rev, 0);
    for (int v = 0; v < n; ++v)
        if (d[static_cast<std::size_t>(v)] == kUnreachable) return false;
    return true;
}

/// Longest shortest-path from `src` to any other node; kUnreachable if some
/// node cannot be reached.
inline int max_shortest_path_from(const std::vector<std::vector<int>>& adj, int src) {
    auto d = bfs_distances(adj, src);
    int worst = 0;
    for (std::size_t v = 0; v < d.size(); ++v) {
        if (static_cast<int>(v) == src) continue;
        if (d[v] == kUnreachable) return kUnreachable;
        worst = std::max(worst, d[v]);
    }
    return worst;
}

struct MaxShortestPath {
    int length = 0;
    int witness_src = 0;
    int witness_dst = 0;
    std::vector<int> witness_sources;  // every source attaining the maximum
};

/// l_max = max over ordered pairs (u, v) of the BFS shortest-path length.
/// Throws naming an unreachable pair when the graph is not strongly connected.
inline MaxShortestPath max_shortest_path(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n < 2) throw ContractViolation("max_shortest_path: need at least 2 nodes");
    MaxShortestPath res;
    res.length = -1;
    for (int u = 0; u < n; ++u) {
        auto d = bfs_distances(adj, u);
        int worst = -1, worst_v = -1;
        for (int v = 0; v < n; ++v) {
            if (v == u) continue;
            if (d[static_cast<std::size_t>(v)] == kUnreachable)
                throw ContractViolation("max_shortest_path: node " + std::to_string(v) +
                                        " unreachable from node " + std::to_string(u));
            if (d[static_cast<std::size_t>(v)] > worst) {
                worst = d[static_cast<std::size_t>(v)];
                worst_v = v;
            }
        }
        if (worst > res.length) {
            res.length = worst;
            res.witness_src = u;
            res.witness_dst = worst_v;
            res.witness_sources.clear();
        }
        if (worst == res.length) res.witness_sources.push_back(u);
    }
    return res;
}

inline MaxShortestPath max_shortest_path(const UavGraph& g) {
    return max_shortest_path(g.out);
}

/// Length of the shortest directed cycle through `start`: one hop to a
/// successor plus the shortest way back.
inline int min_loop_length(const std::vector<std::vector<int>>& adj, int start) {
    if (start < 0 || start >= static_cast<int>(adj.size()))
        throw ContractViolation("min_loop_length: start node out of range");
    int best = kUnreachable;
    for (int s : adj[static_cast<std::size_t>(start)]) {
        auto d = bfs_distances(adj, s);
        if (d[static_cast<std::size_t>(start)] != kUnreachable)
            best = std::min(best, 1 + d[static_cast<std::size_t>(start)]);
    }
    if (best == kUnreachable)
        throw ContractViolation("min_loop_length: no directed cycle through node " +
                                std::to_string(start));
    return best;
}

inline int min_loop_length(const UavGraph& g, int start) {
    return min_loop_length(g.out, start);
}

/// Path-length inputs the completion analysis needs from a topology:
/// the global l_max and the shortest loop through a witness source. When
/// several sources attain l_max, the smallest loop among them is reported.
struct PathProfile {
    int l_max = 0;
    int l_loop_min = 0;
    int homogeneous_in_degree = 0;  // max in-degree when heterogeneous
};

inline PathProfile path_profile(const UavGraph& g) {
    PathProfile p;
    auto msp = max_shortest_path(g);
    p.l_max = msp.length;
    int best_loop = kUnreachable;
    for (int u : msp.witness_sources)
        best_loop = std::min(best_loop, min_loop_length(g, u));
    p.l_loop_min = best_loop;
    int n_max = 0;
    for (int i = 0; i < g.node_count(); ++i) n_max = std::max(n_max, g.in_degree(i));
    p.homogeneous_in_degree = n_max;
    return p;
}

}  // namespace uavgan
