// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "ethcg/errors.hpp"
#include "ethcg/trace_model.hpp"

namespace ethcg {

// Shape metrics of one transaction's call tree. Height counts edges on the
// deepest root-to-leaf path; mean degree is over the undirected tree, i.e.
// 2(n-1)/n, which stays below 2 for every tree.
struct TreeMetrics {
    uint64_t node_count = 0;
    uint32_t height = 0;
    double mean_degree = 0.0;
    uint64_t leaf_count = 0;

    bool operator==(const TreeMetrics&) const = default;
};

struct TreeMetricMeans {
    double node_count = 0.0;
    double height = 0.0;
    double mean_degree = 0.0;
    double leaf_count = 0.0;

    bool operator==(const TreeMetricMeans&) const = default;
};

struct BlockCallSummary {
    uint64_t tx_count = 0;
    uint64_t value_transfer_count = 0;
    double value_transfer_ratio = 0.0;
    // Averaged over non-value-transfer transactions; absent when there are none.
    std::optional<TreeMetricMeans> mean_tree;
};

namespace detail {

inline void walk_tree(const CallFrame& frame, uint32_t depth, TreeMetrics& m) {
    ++m.node_count;
    m.height = std::max(m.height, depth);
    if (frame.calls.empty()) ++m.leaf_count;
    for (const CallFrame& sub : frame.calls) walk_tree(sub, depth + 1, m);
}

}  // namespace detail

inline TreeMetrics tree_metrics(const CallFrame& root) {
    TreeMetrics m;
    detail::walk_tree(root, 0, m);
    m.mean_degree = m.node_count == 0
                        ? 0.0
                        : 2.0 * static_cast<double>(m.node_count - 1) /
                              static_cast<double>(m.node_count);
    return m;
}

// A pure value transfer: a single CALL with empty input, no sub-calls, and a
// target account that carries no code.
inline bool is_value_transfer(const CallFrame& root, const TxPrestate& prestate) {
    if (!prestate.has_accessed()) {
        throw MissingDataError("value-transfer classification needs the accessed-state trace");
    }
    if (root.call_type != CallType::Call) return false;
    if (!root.calls.empty()) return false;
    if (!root.input.empty()) return false;
    auto it = prestate.accessed->find(root.to);
    if (it != prestate.accessed->end() && it->second.code && !it->second.code->empty()) {
        return false;
    }
    return true;
}

inline BlockCallSummary block_call_summary(const BlockTrace& block) {
    BlockCallSummary summary;
    summary.tx_count = block.tx_count();
    if (summary.tx_count == 0) return summary;

    TreeMetricMeans sums;
    uint64_t contract_txs = 0;
    for (std::size_t i = 0; i < block.call_roots.size(); ++i) {
        if (is_value_transfer(block.call_roots[i], block.prestates[i])) {
            ++summary.value_transfer_count;
            continue;
        }
        TreeMetrics m = tree_metrics(block.call_roots[i]);
        sums.node_count += static_cast<double>(m.node_count);
        sums.height += static_cast<double>(m.height);
        sums.mean_degree += m.mean_degree;
        sums.leaf_count += static_cast<double>(m.leaf_count);
        ++contract_txs;
    }
    summary.value_transfer_ratio = static_cast<double>(summary.value_transfer_count) /
                                   static_cast<double>(summary.tx_count);
    if (contract_txs > 0) {
        double n = static_cast<double>(contract_txs);
        summary.mean_tree = TreeMetricMeans{sums.node_count / n, sums.height / n,
                                            sums.mean_degree / n, sums.leaf_count / n};
    }
    return summary;
}

}  // namespace ethcg
