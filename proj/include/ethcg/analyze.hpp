// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ethcg/call_analysis.hpp"
#include "ethcg/conflict_graph.hpp"
#include "ethcg/graph_metrics.hpp"
#include "ethcg/rwsets.hpp"
#include "ethcg/store.hpp"
#include "ethcg/trace_model.hpp"

namespace ethcg {

struct AnalyzeOptions {
    bool method_prestate = true;
    bool method_calltracer = true;
    bool mode_rw = true;
    bool mode_all = true;
    uint32_t mc_starts = 1000;
    uint64_t seed = 42;
    uint64_t clique_budget = 100'000'000;
};

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable per-(block, graph slot) seed so records do not depend on worker
// scheduling.
inline uint64_t derive_seed(uint64_t user_seed, uint64_t block_number, uint64_t slot) {
    return splitmix64(splitmix64(user_seed ^ (block_number * 0x9e3779b97f4a7c15ULL)) + slot);
}

}  // namespace detail

// Write-write cause attribution over the whole block via an inverted index:
// a field-granularity key written by w transactions contributes C(w,2)
// unordered conflicting pairs to its cause at its address.
inline void attribute_ww_causes(const std::vector<AccessSets>& field_sets,
                                std::map<Cause, uint64_t>& cause_counts,
                                std::map<Address, CauseCounts>& address_causes) {
    std::map<StateKey, uint64_t> writer_counts;
    for (const AccessSets& sets : field_sets) {
        for (const StateKey& key : sets.writes) ++writer_counts[key];
    }
    for (const auto& [key, writers] : writer_counts) {
        if (writers < 2) continue;
        uint64_t pairs = writers * (writers - 1) / 2;
        Cause cause = cause_of_field(key.field);
        cause_counts[cause] += pairs;
        address_causes[key.address].by_cause(cause) += pairs;
    }
}

// Computes the full per-block record: call-tree summary, conflict graphs for
// the requested method/mode combinations, their metric suites, and the
// write-write cause attribution. Deterministic for a fixed seed.
inline BlockMetricsRecord analyze_block(const BlockTrace& block, const AnalyzeOptions& opts = {}) {
    BlockMetricsRecord record;
    record.block_number = block.block_number;
    record.tx_count = block.tx_count();

    BlockCallSummary summary = block_call_summary(block);
    record.value_transfer_ratio = summary.value_transfer_ratio;
    record.call_tree_means = summary.mean_tree;

    const uint32_t n = static_cast<uint32_t>(block.tx_count());
    std::vector<AccessSets> prestate_field;
    std::vector<AccessSets> prestate_addr;
    if (opts.method_prestate) {
        prestate_field.reserve(n);
        prestate_addr.reserve(n);
        for (uint32_t i = 0; i < n; ++i) {
            prestate_field.push_back(rwsets_from_prestate(i, block.prestates[i]));
            prestate_addr.push_back(project_to_address(prestate_field.back()));
        }
        for (Cause c : kAllCauses) record.ww_cause_counts[c] = 0;
        attribute_ww_causes(prestate_field, record.ww_cause_counts, record.ww_address_causes);
    }
    std::vector<AccessSets> calltracer_sets;
    if (opts.method_calltracer) {
        calltracer_sets.reserve(n);
        for (uint32_t i = 0; i < n; ++i) {
            calltracer_sets.push_back(rwsets_from_calltrace(i, block.call_roots[i]));
        }
    }

    uint64_t slot_index = 0;
    auto compute_slot = [&](const std::vector<AccessSets>& sets, RwMethod method,
                            ConflictMode mode) {
        ConflictGraph graph = build_conflict_graph(sets, mode);
        graph.method = method;
        MetricsOptions metric_opts;
        metric_opts.mc_starts = opts.mc_starts;
        metric_opts.clique_budget = opts.clique_budget;
        metric_opts.seed = detail::derive_seed(opts.seed, block.block_number, slot_index++);
        GraphMetrics metrics = compute_graph_metrics(graph, metric_opts);
        record.graphs[graph_slot_name(method, mode)] =
            GraphMetricsBlock::from_metrics(metrics, graph.edges.size());
    };
    if (opts.method_prestate) {
        if (opts.mode_rw) compute_slot(prestate_addr, RwMethod::Prestate, ConflictMode::RW);
        if (opts.mode_all) compute_slot(prestate_addr, RwMethod::Prestate, ConflictMode::All);
    }
    if (opts.method_calltracer) {
        if (opts.mode_rw) compute_slot(calltracer_sets, RwMethod::CallTracer, ConflictMode::RW);
        if (opts.mode_all) compute_slot(calltracer_sets, RwMethod::CallTracer, ConflictMode::All);
    }
    return record;
}

// Conflict graph of one block for a single method/mode, as used by the
// scheduling simulator.
inline ConflictGraph block_conflict_graph(const BlockTrace& block, RwMethod method,
                                          ConflictMode mode) {
    const uint32_t n = static_cast<uint32_t>(block.tx_count());
    std::vector<AccessSets> sets;
    sets.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        if (method == RwMethod::Prestate) {
            sets.push_back(project_to_address(rwsets_from_prestate(i, block.prestates[i])));
        } else {
            sets.push_back(rwsets_from_calltrace(i, block.call_roots[i]));
        }
    }
    ConflictGraph graph = build_conflict_graph(sets, mode);
    graph.method = method;
    return graph;
}

}  // namespace ethcg
