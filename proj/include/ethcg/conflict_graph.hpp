// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ethcg/errors.hpp"
#include "ethcg/rwsets.hpp"

namespace ethcg {

// RW keeps only read-write/write-read conflicts; All also keeps write-write.
enum class ConflictMode : uint8_t { RW, All };

inline std::string to_string(ConflictMode m) { return m == ConflictMode::RW ? "rw" : "all"; }

// Undirected conflict graph over one block's transactions. Edges are stored
// as (i, j) with i < j, sorted ascending and deduplicated.
struct ConflictGraph {
    uint32_t num_nodes = 0;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    ConflictMode mode = ConflictMode::RW;
    RwMethod method = RwMethod::Prestate;

    std::size_t edge_count() const { return edges.size(); }
};

inline std::vector<std::vector<uint32_t>> adjacency(const ConflictGraph& g) {
    std::vector<std::vector<uint32_t>> adj(g.num_nodes);
    for (auto [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

// Builds the conflict graph from per-transaction access sets. An edge joins
// transactions i and j when a key written by one appears in the read set
// (mode=RW) or the read-or-write set (mode=All) of the other. Construction
// uses an inverted key index rather than the quadratic pairwise scan.
inline ConflictGraph build_conflict_graph(const std::vector<AccessSets>& sets, ConflictMode mode) {
    ConflictGraph g;
    g.num_nodes = static_cast<uint32_t>(sets.size());
    g.mode = mode;
    if (sets.empty()) return g;

    g.method = sets.front().method;
    Granularity granularity = sets.front().granularity;
    for (const AccessSets& s : sets) {
        if (s.granularity != granularity) {
            throw GranularityError("access sets mix field- and address-granularity keys");
        }
        if (s.method != g.method) {
            throw GranularityError("access sets mix prestate and calltracer methods");
        }
        if (s.tx_index >= sets.size()) {
            throw InvalidArgumentError("tx_index " + std::to_string(s.tx_index) +
                                       " out of range for block of " +
                                       std::to_string(sets.size()));
        }
    }

    struct KeyUses {
        std::vector<uint32_t> readers;
        std::vector<uint32_t> writers;
    };
    std::map<StateKey, KeyUses> index;
    for (const AccessSets& s : sets) {
        for (const StateKey& key : s.reads) index[key].readers.push_back(s.tx_index);
        for (const StateKey& key : s.writes) index[key].writers.push_back(s.tx_index);
    }

    std::vector<std::pair<uint32_t, uint32_t>> edges;
    auto add_edge = [&edges](uint32_t a, uint32_t b) {
        if (a == b) return;
        edges.emplace_back(std::min(a, b), std::max(a, b));
    };
    for (const auto& [key, uses] : index) {
        for (uint32_t w : uses.writers) {
            for (uint32_t r : uses.readers) add_edge(w, r);
        }
        if (mode == ConflictMode::All) {
            for (std::size_t a = 0; a < uses.writers.size(); ++a) {
                for (std::size_t b = a + 1; b < uses.writers.size(); ++b) {
                    add_edge(uses.writers[a], uses.writers[b]);
                }
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges = std::move(edges);
    return g;
}

// Edge-list text format: first line `n m`, then `i j` per edge, ascending.
inline void write_edge_list(std::ostream& out, const ConflictGraph& g) {
    out << g.num_nodes << ' ' << g.edges.size() << '\n';
    for (auto [i, j] : g.edges) out << i << ' ' << j << '\n';
}

inline ConflictGraph read_edge_list(std::istream& in) {
    ConflictGraph g;
    std::size_t edge_count = 0;
    if (!(in >> g.num_nodes >> edge_count)) {
        throw ParseError("edge list must start with 'n m'");
    }
    g.edges.reserve(edge_count);
    for (std::size_t k = 0; k < edge_count; ++k) {
        uint32_t i = 0, j = 0;
        if (!(in >> i >> j)) {
            throw ParseError("edge list truncated at edge " + std::to_string(k));
        }
        if (i == j || i >= g.num_nodes || j >= g.num_nodes) {
            throw ParseError("edge " + std::to_string(i) + "-" + std::to_string(j) +
                             " invalid for " + std::to_string(g.num_nodes) + " nodes");
        }
        g.edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

}  // namespace ethcg
