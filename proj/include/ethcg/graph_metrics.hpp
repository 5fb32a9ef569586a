// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ethcg/conflict_graph.hpp"
#include "ethcg/errors.hpp"

namespace ethcg {

struct DsaturResult {
    uint32_t color_count = 0;
    std::vector<uint32_t> assignment;
};

struct CliqueResult {
    uint32_t size = 0;
    std::vector<uint32_t> members;
    // False when the expansion budget ran out; `size` is then a lower bound.
    bool exact = true;
};

struct GraphMetrics {
    double density = 0.0;
    uint32_t diameter = 0;
    double mean_degree = 0.0;
    uint32_t max_degree = 0;
    std::optional<double> assortativity;
    std::vector<uint32_t> component_sizes;  // descending
    uint32_t largest_cc = 0;
    uint32_t greedy_colors = 0;
    uint32_t clique_number = 0;
    bool clique_exact = true;
    uint32_t longest_path_edges = 0;
    std::optional<double> ratio_lower;
    std::optional<double> ratio_upper;
};

// 2|E| / (n(n-1)); zero for graphs with fewer than two nodes.
inline double density(const ConflictGraph& g) {
    if (g.num_nodes < 2) return 0.0;
    double n = static_cast<double>(g.num_nodes);
    return 2.0 * static_cast<double>(g.edges.size()) / (n * (n - 1.0));
}

namespace detail {

// Component ids plus sizes, via BFS.
struct Components {
    std::vector<uint32_t> id;          // per node
    std::vector<std::vector<uint32_t>> members;  // per component
};

inline Components find_components(const std::vector<std::vector<uint32_t>>& adj) {
    Components comps;
    const uint32_t n = static_cast<uint32_t>(adj.size());
    comps.id.assign(n, UINT32_MAX);
    std::deque<uint32_t> queue;
    for (uint32_t start = 0; start < n; ++start) {
        if (comps.id[start] != UINT32_MAX) continue;
        uint32_t cid = static_cast<uint32_t>(comps.members.size());
        comps.members.emplace_back();
        comps.id[start] = cid;
        queue.push_back(start);
        while (!queue.empty()) {
            uint32_t u = queue.front();
            queue.pop_front();
            comps.members[cid].push_back(u);
            for (uint32_t v : adj[u]) {
                if (comps.id[v] == UINT32_MAX) {
                    comps.id[v] = cid;
                    queue.push_back(v);
                }
            }
        }
    }
    return comps;
}

inline std::vector<uint32_t> bfs_distances(const std::vector<std::vector<uint32_t>>& adj,
                                           uint32_t source) {
    std::vector<uint32_t> dist(adj.size(), UINT32_MAX);
    std::deque<uint32_t> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        uint32_t u = queue.front();
        queue.pop_front();
        for (uint32_t v : adj[u]) {
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

}  // namespace detail

// Component sizes in descending order; isolated nodes count as size-1.
inline std::vector<uint32_t> connected_components(const ConflictGraph& g) {
    auto comps = detail::find_components(adjacency(g));
    std::vector<uint32_t> sizes;
    sizes.reserve(comps.members.size());
    for (const auto& members : comps.members) {
        sizes.push_back(static_cast<uint32_t>(members.size()));
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

// Diameter of the largest connected component (ties broken toward the
// component containing the lowest node index). Whole-graph diameter would be
// infinite whenever isolated transactions exist.
inline uint32_t diameter(const ConflictGraph& g) {
    if (g.num_nodes == 0) return 0;
    auto adj = adjacency(g);
    auto comps = detail::find_components(adj);
    const std::vector<uint32_t>* largest = nullptr;
    for (const auto& members : comps.members) {
        if (!largest || members.size() > largest->size()) largest = &members;
    }
    if (!largest || largest->size() < 2) return 0;
    uint32_t best = 0;
    for (uint32_t u : *largest) {
        auto dist = detail::bfs_distances(adj, u);
        for (uint32_t v : *largest) {
            if (dist[v] != UINT32_MAX) best = std::max(best, dist[v]);
        }
    }
    return best;
}

inline std::pair<double, uint32_t> degree_stats(const ConflictGraph& g) {
    if (g.num_nodes == 0) return {0.0, 0};
    std::vector<uint32_t> degree(g.num_nodes, 0);
    for (auto [i, j] : g.edges) {
        ++degree[i];
        ++degree[j];
    }
    uint32_t max_degree = *std::max_element(degree.begin(), degree.end());
    double mean = 2.0 * static_cast<double>(g.edges.size()) / static_cast<double>(g.num_nodes);
    return {mean, max_degree};
}

// Degree assortativity: Pearson correlation of endpoint degrees over the edge
// list with both orientations. Computed from the integer edge sums
//   r = (4M*S3 - S1^2) / (2M*S2 - S1^2)
// with S1 = sum(du+dv), S2 = sum(du^2+dv^2), S3 = sum(du*dv), so degenerate
// variance is detected exactly; regular and empty graphs yield nullopt.
inline std::optional<double> assortativity(const ConflictGraph& g) {
    if (g.edges.empty()) return std::nullopt;
    std::vector<uint64_t> degree(g.num_nodes, 0);
    for (auto [i, j] : g.edges) {
        ++degree[i];
        ++degree[j];
    }
    unsigned __int128 s1 = 0, s2 = 0, s3 = 0;
    for (auto [i, j] : g.edges) {
        uint64_t du = degree[i], dv = degree[j];
        s1 += du + dv;
        s2 += du * du + dv * dv;
        s3 += du * dv;
    }
    unsigned __int128 m = g.edges.size();
    __int128 numerator = static_cast<__int128>(4 * m * s3) - static_cast<__int128>(s1 * s1);
    __int128 denominator = static_cast<__int128>(2 * m * s2) - static_cast<__int128>(s1 * s1);
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

// DSATUR greedy coloring. Selection rule: maximum saturation (distinct
// neighbor colors), ties by higher degree, then lower index; each chosen node
// gets the smallest feasible color.
inline DsaturResult dsatur_coloring(const ConflictGraph& g) {
    DsaturResult result;
    const uint32_t n = g.num_nodes;
    result.assignment.assign(n, UINT32_MAX);
    if (n == 0) return result;

    auto adj = adjacency(g);
    std::vector<std::set<uint32_t>> neighbor_colors(n);
    std::vector<uint32_t> degree(n);
    for (uint32_t u = 0; u < n; ++u) degree[u] = static_cast<uint32_t>(adj[u].size());

    for (uint32_t step = 0; step < n; ++step) {
        uint32_t pick = UINT32_MAX;
        std::size_t best_sat = 0;
        uint32_t best_deg = 0;
        for (uint32_t u = 0; u < n; ++u) {
            if (result.assignment[u] != UINT32_MAX) continue;
            std::size_t sat = neighbor_colors[u].size();
            if (pick == UINT32_MAX || sat > best_sat ||
                (sat == best_sat && degree[u] > best_deg)) {
                pick = u;
                best_sat = sat;
                best_deg = degree[u];
            }
        }
        uint32_t color = 0;
        while (neighbor_colors[pick].contains(color)) ++color;
        result.assignment[pick] = color;
        result.color_count = std::max(result.color_count, color + 1);
        for (uint32_t v : adj[pick]) neighbor_colors[v].insert(color);
    }
    return result;
}

namespace detail {

// Branch-and-bound maximum clique with a greedy-coloring bound (Tomita-style).
struct CliqueSearch {
    const std::vector<std::vector<uint32_t>>& adj;
    std::vector<std::vector<bool>> is_adj;
    uint64_t budget;
    uint64_t expansions = 0;
    bool budget_hit = false;
    std::vector<uint32_t> best;
    std::vector<uint32_t> current;

    CliqueSearch(const std::vector<std::vector<uint32_t>>& a, uint64_t b) : adj(a), budget(b) {
        const std::size_t n = adj.size();
        is_adj.assign(n, std::vector<bool>(n, false));
        for (uint32_t u = 0; u < n; ++u) {
            for (uint32_t v : adj[u]) is_adj[u][v] = true;
        }
    }

    // Greedy coloring of the candidate set; returns candidates reordered by
    // ascending color with their color numbers (upper bounds).
    void color_sort(const std::vector<uint32_t>& candidates, std::vector<uint32_t>& ordered,
                    std::vector<uint32_t>& colors) const {
        ordered.clear();
        colors.clear();
        std::vector<std::vector<uint32_t>> classes;
        for (uint32_t v : candidates) {
            bool placed = false;
            for (auto& cls : classes) {
                bool conflict = false;
                for (uint32_t u : cls) {
                    if (is_adj[u][v]) {
                        conflict = true;
                        break;
                    }
                }
                if (!conflict) {
                    cls.push_back(v);
                    placed = true;
                    break;
                }
            }
            if (!placed) classes.push_back({v});
        }
        for (uint32_t c = 0; c < classes.size(); ++c) {
            for (uint32_t v : classes[c]) {
                ordered.push_back(v);
                colors.push_back(c + 1);
            }
        }
    }

    void expand(std::vector<uint32_t>& candidates) {
        if (budget_hit) return;
        if (++expansions > budget) {
            budget_hit = true;
            return;
        }
        std::vector<uint32_t> ordered, colors;
        color_sort(candidates, ordered, colors);
        for (std::size_t idx = ordered.size(); idx-- > 0;) {
            if (current.size() + colors[idx] <= best.size()) return;
            uint32_t v = ordered[idx];
            current.push_back(v);
            std::vector<uint32_t> next;
            for (std::size_t k = 0; k < idx; ++k) {
                if (is_adj[v][ordered[k]]) next.push_back(ordered[k]);
            }
            if (next.empty()) {
                if (current.size() > best.size()) best = current;
            } else {
                expand(next);
            }
            current.pop_back();
            if (budget_hit) return;
        }
    }
};

}  // namespace detail

// Exact maximum clique for block-scale sparse graphs. When the expansion
// budget is exceeded the best clique found so far is returned with
// exact=false (a lower bound).
inline CliqueResult max_clique(const ConflictGraph& g, uint64_t budget = 100'000'000) {
    CliqueResult result;
    if (g.num_nodes == 0) return result;
    auto adj = adjacency(g);

    // Degeneracy-ish seed order: descending degree, index ties.
    std::vector<uint32_t> order(g.num_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return adj[a].size() > adj[b].size();
    });

    detail::CliqueSearch search(adj, budget);
    search.best = {order.front()};
    std::vector<uint32_t> candidates = order;
    search.expand(candidates);

    result.members = search.best;
    std::sort(result.members.begin(), result.members.end());
    result.size = static_cast<uint32_t>(search.best.size());
    result.exact = !search.budget_hit;
    return result;
}

inline uint32_t clique_number(const ConflictGraph& g, uint64_t budget = 100'000'000) {
    return max_clique(g, budget).size;
}

// Monte Carlo longest simple path estimate, in edges. Components are
// processed in descending size; a component no larger than the best path's
// node count is skipped. From each sampled start the path extends to a
// uniformly chosen unvisited neighbor until stuck. Deterministic per seed.
inline uint32_t longest_path_mc(const ConflictGraph& g, uint32_t starts_per_component,
                                uint64_t seed) {
    if (starts_per_component == 0) {
        throw InvalidArgumentError("starts_per_component must be at least 1");
    }
    if (g.num_nodes == 0) return 0;
    auto adj = adjacency(g);
    auto comps = detail::find_components(adj);
    std::sort(comps.members.begin(), comps.members.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::mt19937_64 rng(seed);
    auto draw = [&rng](std::size_t bound) { return static_cast<std::size_t>(rng() % bound); };

    uint32_t best_edges = 0;
    std::vector<bool> visited(g.num_nodes, false);
    std::vector<uint32_t> frontier;
    for (const auto& members : comps.members) {
        if (members.size() <= static_cast<std::size_t>(best_edges) + 1) continue;
        for (uint32_t s = 0; s < starts_per_component; ++s) {
            uint32_t node = members[draw(members.size())];
            for (uint32_t m : members) visited[m] = false;
            visited[node] = true;
            uint32_t length = 0;
            while (true) {
                frontier.clear();
                for (uint32_t v : adj[node]) {
                    if (!visited[v]) frontier.push_back(v);
                }
                if (frontier.empty()) break;
                node = frontier[draw(frontier.size())];
                visited[node] = true;
                ++length;
            }
            best_edges = std::max(best_edges, length);
        }
    }
    return best_edges;
}

// Bounds on the longest-simple-path to chromatic-number ratio. The numerator
// of the lower bound is the Monte Carlo path in nodes so both ratios share
// units; both are undefined when the block is empty.
inline std::pair<std::optional<double>, std::optional<double>> ratio_bounds(
    const GraphMetrics& m) {
    if (m.greedy_colors == 0 || m.clique_number == 0) return {std::nullopt, std::nullopt};
    double lower = static_cast<double>(m.longest_path_edges + 1) /
                   static_cast<double>(m.greedy_colors);
    double upper = static_cast<double>(m.largest_cc) / static_cast<double>(m.clique_number);
    return {lower, upper};
}

struct MetricsOptions {
    uint32_t mc_starts = 1000;
    uint64_t seed = 0;
    uint64_t clique_budget = 100'000'000;
};

inline GraphMetrics compute_graph_metrics(const ConflictGraph& g,
                                          const MetricsOptions& opts = {}) {
    GraphMetrics m;
    m.density = density(g);
    m.component_sizes = connected_components(g);
    m.largest_cc = m.component_sizes.empty() ? 0 : m.component_sizes.front();
    m.diameter = diameter(g);
    std::tie(m.mean_degree, m.max_degree) = degree_stats(g);
    m.assortativity = assortativity(g);
    m.greedy_colors = dsatur_coloring(g).color_count;
    CliqueResult clique = max_clique(g, opts.clique_budget);
    m.clique_number = clique.size;
    m.clique_exact = clique.exact;
    m.longest_path_edges = longest_path_mc(g, std::max<uint32_t>(1, opts.mc_starts), opts.seed);
    std::tie(m.ratio_lower, m.ratio_upper) = ratio_bounds(m);
    return m;
}

}  // namespace ethcg
