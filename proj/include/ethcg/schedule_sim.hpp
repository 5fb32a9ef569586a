// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ethcg/conflict_graph.hpp"
#include "ethcg/errors.hpp"
#include "ethcg/graph_metrics.hpp"
#include "ethcg/trace_model.hpp"

namespace ethcg {

enum class WeightKind : uint8_t { Gas, Unit };

// A block's conflict graph with per-transaction execution costs, in block
// order 0..n-1.
struct Workload {
    ConflictGraph graph;
    std::vector<double> weights;
};

inline void validate_workload(const Workload& w) {
    if (w.weights.size() != w.graph.num_nodes) {
        throw InvalidArgumentError("workload weights length " + std::to_string(w.weights.size()) +
                                   " does not match " + std::to_string(w.graph.num_nodes) +
                                   " transactions");
    }
    for (double x : w.weights) {
        if (!(x > 0.0)) throw InvalidArgumentError("workload weights must be positive");
    }
}

// Weights from the root call frame's gas usage (fallback 1 when absent).
inline Workload make_workload(const ConflictGraph& graph, const BlockTrace& block,
                              WeightKind kind) {
    Workload w;
    w.graph = graph;
    w.weights.reserve(graph.num_nodes);
    for (uint32_t i = 0; i < graph.num_nodes; ++i) {
        if (kind == WeightKind::Gas && i < block.call_roots.size() &&
            block.call_roots[i].gas_used > 0) {
            w.weights.push_back(static_cast<double>(block.call_roots[i].gas_used));
        } else {
            w.weights.push_back(1.0);
        }
    }
    return w;
}

// Block-order scheduling: every conflict edge is directed from the lower to
// the higher block index and the makespan is the critical (maximum-weight)
// path through the resulting DAG, with unbounded workers.
inline double order_dag_makespan(const Workload& w) {
    validate_workload(w);
    const uint32_t n = w.graph.num_nodes;
    if (n == 0) return 0.0;
    std::vector<std::vector<uint32_t>> preds(n);
    for (auto [i, j] : w.graph.edges) preds[j].push_back(i);  // i < j by construction
    std::vector<double> finish(n, 0.0);
    double makespan = 0.0;
    for (uint32_t v = 0; v < n; ++v) {
        double start = 0.0;
        for (uint32_t p : preds[v]) start = std::max(start, finish[p]);
        finish[v] = start + w.weights[v];
        makespan = std::max(makespan, finish[v]);
    }
    return makespan;
}

// Chromatic-round scheduling: color classes run in ascending color order with
// a barrier between rounds; each round lasts as long as its heaviest
// transaction, with unbounded workers.
inline double coloring_makespan(const Workload& w, const std::vector<uint32_t>& coloring) {
    validate_workload(w);
    if (coloring.size() != w.graph.num_nodes) {
        throw InvalidColoringError("coloring length does not match transaction count");
    }
    for (auto [i, j] : w.graph.edges) {
        if (coloring[i] == coloring[j]) {
            throw InvalidColoringError("edge " + std::to_string(i) + "-" + std::to_string(j) +
                                       " is monochromatic");
        }
    }
    uint32_t colors = 0;
    for (uint32_t c : coloring) colors = std::max(colors, c + 1);
    std::vector<double> round_duration(colors, 0.0);
    for (uint32_t v = 0; v < w.graph.num_nodes; ++v) {
        round_duration[coloring[v]] = std::max(round_duration[coloring[v]], w.weights[v]);
    }
    return std::accumulate(round_duration.begin(), round_duration.end(), 0.0);
}

// List scheduling on `workers` identical machines: tasks become ready in
// block order once their lower-index conflict predecessors finish; each ready
// task goes to the earliest-free worker.
inline double order_dag_makespan_bounded(const Workload& w, uint32_t workers) {
    validate_workload(w);
    if (workers < 1) throw InvalidArgumentError("worker count must be at least 1");
    const uint32_t n = w.graph.num_nodes;
    if (n == 0) return 0.0;
    std::vector<std::vector<uint32_t>> preds(n);
    for (auto [i, j] : w.graph.edges) preds[j].push_back(i);
    std::vector<double> worker_free(workers, 0.0);
    std::vector<double> finish(n, 0.0);
    double makespan = 0.0;
    for (uint32_t v = 0; v < n; ++v) {
        double ready = 0.0;
        for (uint32_t p : preds[v]) ready = std::max(ready, finish[p]);
        auto earliest = std::min_element(worker_free.begin(), worker_free.end());
        double start = std::max(ready, *earliest);
        finish[v] = start + w.weights[v];
        *earliest = finish[v];
        makespan = std::max(makespan, finish[v]);
    }
    return makespan;
}

// Color rounds with a barrier, each round list-scheduled on `workers`
// machines (heaviest transactions first).
inline double coloring_makespan_bounded(const Workload& w, const std::vector<uint32_t>& coloring,
                                        uint32_t workers) {
    validate_workload(w);
    if (workers < 1) throw InvalidArgumentError("worker count must be at least 1");
    if (coloring.size() != w.graph.num_nodes) {
        throw InvalidColoringError("coloring length does not match transaction count");
    }
    for (auto [i, j] : w.graph.edges) {
        if (coloring[i] == coloring[j]) {
            throw InvalidColoringError("edge " + std::to_string(i) + "-" + std::to_string(j) +
                                       " is monochromatic");
        }
    }
    uint32_t colors = 0;
    for (uint32_t c : coloring) colors = std::max(colors, c + 1);
    std::vector<std::vector<double>> classes(colors);
    for (uint32_t v = 0; v < w.graph.num_nodes; ++v) {
        classes[coloring[v]].push_back(w.weights[v]);
    }
    double total = 0.0;
    std::vector<double> worker_load;
    for (auto& weights : classes) {
        std::sort(weights.rbegin(), weights.rend());
        worker_load.assign(workers, 0.0);
        for (double weight : weights) {
            *std::min_element(worker_load.begin(), worker_load.end()) += weight;
        }
        total += *std::max_element(worker_load.begin(), worker_load.end());
    }
    return total;
}

struct SpeedupReport {
    double sequential_time = 0.0;
    double order_makespan = 0.0;
    double coloring_makespan = 0.0;
    uint32_t colors_used = 0;
    std::optional<double> order_speedup;
    std::optional<double> coloring_speedup;
    std::optional<double> coloring_vs_order;
};

// Unbounded workers by default (workers = 0); a positive worker count
// switches both schedules to bounded list scheduling.
inline SpeedupReport speedup_report(const Workload& w, uint32_t workers = 0) {
    validate_workload(w);
    SpeedupReport report;
    report.sequential_time = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    if (w.graph.num_nodes == 0) return report;

    DsaturResult coloring = dsatur_coloring(w.graph);
    report.colors_used = coloring.color_count;
    if (workers == 0) {
        report.order_makespan = order_dag_makespan(w);
        report.coloring_makespan = coloring_makespan(w, coloring.assignment);
    } else {
        report.order_makespan = order_dag_makespan_bounded(w, workers);
        report.coloring_makespan = coloring_makespan_bounded(w, coloring.assignment, workers);
    }
    if (report.order_makespan > 0.0) {
        report.order_speedup = report.sequential_time / report.order_makespan;
    }
    if (report.coloring_makespan > 0.0) {
        report.coloring_speedup = report.sequential_time / report.coloring_makespan;
        report.coloring_vs_order = report.order_makespan / report.coloring_makespan;
    }
    return report;
}

}  // namespace ethcg
