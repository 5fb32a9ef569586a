// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ethcg/bytes.hpp"
#include "ethcg/conflict_graph.hpp"
#include "ethcg/errors.hpp"
#include "ethcg/rwsets.hpp"

namespace ethcg {

// Synthetic workloads for tests and demos, shaped after the hub-and-spoke
// structure real blocks exhibit.

inline ConflictGraph synth_star(uint32_t n) {
    if (n < 1) throw InvalidArgumentError("star needs at least 1 node");
    ConflictGraph g;
    g.num_nodes = n;
    for (uint32_t i = 1; i < n; ++i) g.edges.emplace_back(0, i);
    return g;
}

inline ConflictGraph synth_gnp(uint32_t n, double p, uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw InvalidArgumentError("edge probability must be in [0, 1]");
    ConflictGraph g;
    g.num_nodes = n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = i + 1; j < n; ++j) {
            if (coin(rng) < p) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

namespace detail {

inline Address synth_addr(uint64_t seed, uint32_t id) {
    Address a;
    uint64_t state = seed ^ (0xa076'1d64'78bd'642fULL + id);
    for (std::size_t i = 0; i < a.bytes.size(); ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        a.bytes[i] = static_cast<uint8_t>(state >> 56);
    }
    return a;
}

}  // namespace detail

// Hotspot workload: transaction 0 writes one shared key which the next
// hub_degree transactions read; every transaction also writes a private key.
// Its RW conflict graph is exactly the star K(1, hub_degree) plus isolated
// nodes.
inline std::vector<AccessSets> synth_hotspot(uint32_t n, uint32_t hub_degree, uint64_t seed) {
    if (n < 1) throw InvalidArgumentError("hotspot needs at least 1 transaction");
    if (hub_degree >= n) {
        throw InvalidArgumentError("hub degree must be below the transaction count");
    }
    StateKey hot{detail::synth_addr(seed, 0xffff'fffe), StateField::whole_account()};
    std::vector<AccessSets> sets(n);
    for (uint32_t i = 0; i < n; ++i) {
        sets[i].tx_index = i;
        sets[i].method = RwMethod::Prestate;
        sets[i].granularity = Granularity::AddressLevel;
        sets[i].writes.insert({detail::synth_addr(seed, i), StateField::whole_account()});
        if (i == 0) {
            sets[i].writes.insert(hot);
        } else if (i <= hub_degree) {
            sets[i].reads.insert(hot);
        }
    }
    return sets;
}

}  // namespace ethcg
