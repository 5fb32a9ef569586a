// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ethcg/bytes.hpp"
#include "ethcg/call_analysis.hpp"
#include "ethcg/errors.hpp"
#include "ethcg/graph_metrics.hpp"
#include "ethcg/gzio.hpp"
#include "ethcg/rwsets.hpp"
#include "ethcg/trace_model.hpp"

namespace ethcg {

inline constexpr int kSchemaVersion = 1;

enum class TracerKind : uint8_t { Call, Prestate, PrestateDiff };

inline constexpr TracerKind kAllTracers[] = {TracerKind::Call, TracerKind::Prestate,
                                             TracerKind::PrestateDiff};

inline std::string to_string(TracerKind kind) {
    switch (kind) {
        case TracerKind::Call: return "call";
        case TracerKind::Prestate: return "prestate";
        case TracerKind::PrestateDiff: return "prestate_diff";
    }
    return "call";
}

inline TracerKind tracer_kind_from_string(std::string_view s) {
    if (s == "call") return TracerKind::Call;
    if (s == "prestate") return TracerKind::Prestate;
    if (s == "prestate_diff") return TracerKind::PrestateDiff;
    throw InvalidArgumentError("unknown tracer kind '" + std::string(s) + "'");
}

// File layout under a data root:
//   traces/<block>.{call,prestate,prestate_diff}.gz   raw response bodies
//   metrics/records.jsonl.gz                          one record per line
//   reports/*.csv, reports/*.svg
inline std::filesystem::path trace_path(const std::filesystem::path& root, uint64_t block,
                                        TracerKind kind) {
    return root / "traces" / (std::to_string(block) + "." + to_string(kind) + ".gz");
}

inline std::filesystem::path records_path(const std::filesystem::path& root) {
    return root / "metrics" / "records.jsonl.gz";
}

inline std::filesystem::path reports_dir(const std::filesystem::path& root) {
    return root / "reports";
}

// Raw responses are archived byte-exactly, via a temp file + rename so a
// crash never leaves a half-written archive behind.
inline void archive_raw_trace(const std::filesystem::path& root, uint64_t block, TracerKind kind,
                              std::string_view body) {
    std::filesystem::path target = trace_path(root, block, kind);
    std::filesystem::create_directories(target.parent_path());
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    gzip_write_all(tmp, body);
    std::filesystem::rename(tmp, target);
}

inline std::string load_raw_trace(const std::filesystem::path& root, uint64_t block,
                                  TracerKind kind) {
    std::filesystem::path path = trace_path(root, block, kind);
    if (!std::filesystem::exists(path)) {
        throw IoError("missing trace file: " + path.string());
    }
    return gzip_read_all(path);
}

inline bool has_raw_trace(const std::filesystem::path& root, uint64_t block, TracerKind kind) {
    return std::filesystem::exists(trace_path(root, block, kind));
}

// Blocks with at least one archived trace, ascending.
inline std::vector<uint64_t> list_archived_blocks(const std::filesystem::path& root) {
    std::set<uint64_t> blocks;
    std::filesystem::path dir = root / "traces";
    if (!std::filesystem::exists(dir)) return {};
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        std::size_t dot = name.find('.');
        if (dot == std::string::npos) continue;
        std::string number = name.substr(0, dot);
        if (number.empty() ||
            number.find_first_not_of("0123456789") != std::string::npos) {
            continue;
        }
        blocks.insert(std::stoull(number));
    }
    return {blocks.begin(), blocks.end()};
}

inline BlockTrace load_block_trace(const std::filesystem::path& root, uint64_t block,
                                   ParseDiagnostics* diag = nullptr) {
    return assemble_block_trace(block, load_raw_trace(root, block, TracerKind::Call),
                                load_raw_trace(root, block, TracerKind::Prestate),
                                load_raw_trace(root, block, TracerKind::PrestateDiff), diag);
}

// Per-(address, cause) write-write conflict counts.
struct CauseCounts {
    uint64_t balance = 0;
    uint64_t nonce = 0;
    uint64_t storage = 0;
    uint64_t code = 0;

    bool operator==(const CauseCounts&) const = default;

    uint64_t total() const { return balance + nonce + storage + code; }

    uint64_t& by_cause(Cause c) {
        switch (c) {
            case Cause::Balance: return balance;
            case Cause::Nonce: return nonce;
            case Cause::Storage: return storage;
            case Cause::Code: return code;
        }
        return balance;
    }

    uint64_t by_cause(Cause c) const {
        return const_cast<CauseCounts*>(this)->by_cause(c);
    }
};

// Summary of one conflict graph's metrics as persisted per block. Component
// sizes are summarized as (largest_cc, component_count).
struct GraphMetricsBlock {
    double density = 0.0;
    uint32_t diameter = 0;
    double mean_degree = 0.0;
    uint32_t max_degree = 0;
    std::optional<double> assortativity;
    uint32_t largest_cc = 0;
    uint32_t component_count = 0;
    uint32_t greedy_colors = 0;
    uint32_t clique_number = 0;
    bool clique_exact = true;
    uint32_t longest_path_edges = 0;
    std::optional<double> ratio_lower;
    std::optional<double> ratio_upper;
    uint64_t edge_count = 0;

    bool operator==(const GraphMetricsBlock&) const = default;

    static GraphMetricsBlock from_metrics(const GraphMetrics& m, uint64_t edges) {
        GraphMetricsBlock b;
        b.density = m.density;
        b.diameter = m.diameter;
        b.mean_degree = m.mean_degree;
        b.max_degree = m.max_degree;
        b.assortativity = m.assortativity;
        b.largest_cc = m.largest_cc;
        b.component_count = static_cast<uint32_t>(m.component_sizes.size());
        b.greedy_colors = m.greedy_colors;
        b.clique_number = m.clique_number;
        b.clique_exact = m.clique_exact;
        b.longest_path_edges = m.longest_path_edges;
        b.ratio_lower = m.ratio_lower;
        b.ratio_upper = m.ratio_upper;
        b.edge_count = edges;
        return b;
    }
};

// Everything computed for one block, one line in the records file.
struct BlockMetricsRecord {
    int schema_version = kSchemaVersion;
    uint64_t block_number = 0;
    uint64_t tx_count = 0;
    double value_transfer_ratio = 0.0;
    std::optional<TreeMetricMeans> call_tree_means;
    // Keys: prestate_rw, prestate_all, calltracer_rw, calltracer_all.
    std::map<std::string, GraphMetricsBlock> graphs;
    std::map<Cause, uint64_t> ww_cause_counts;
    std::map<Address, CauseCounts> ww_address_causes;

    bool operator==(const BlockMetricsRecord&) const = default;
};

inline std::string graph_slot_name(RwMethod method, ConflictMode mode) {
    return to_string(method) + "_" + to_string(mode);
}

namespace detail {

inline json opt_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

inline std::optional<double> opt_from_json(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

}  // namespace detail

inline json to_json(const GraphMetricsBlock& b) {
    return json{{"density", b.density},
                {"diameter", b.diameter},
                {"mean_degree", b.mean_degree},
                {"max_degree", b.max_degree},
                {"assortativity", detail::opt_to_json(b.assortativity)},
                {"largest_cc", b.largest_cc},
                {"component_count", b.component_count},
                {"greedy_colors", b.greedy_colors},
                {"clique_number", b.clique_number},
                {"clique_exact", b.clique_exact},
                {"longest_path_edges", b.longest_path_edges},
                {"ratio_lower", detail::opt_to_json(b.ratio_lower)},
                {"ratio_upper", detail::opt_to_json(b.ratio_upper)},
                {"edge_count", b.edge_count}};
}

inline GraphMetricsBlock graph_block_from_json(const json& j) {
    GraphMetricsBlock b;
    b.density = j.at("density").get<double>();
    b.diameter = j.at("diameter").get<uint32_t>();
    b.mean_degree = j.at("mean_degree").get<double>();
    b.max_degree = j.at("max_degree").get<uint32_t>();
    b.assortativity = detail::opt_from_json(j, "assortativity");
    b.largest_cc = j.at("largest_cc").get<uint32_t>();
    b.component_count = j.at("component_count").get<uint32_t>();
    b.greedy_colors = j.at("greedy_colors").get<uint32_t>();
    b.clique_number = j.at("clique_number").get<uint32_t>();
    b.clique_exact = j.value("clique_exact", true);
    b.longest_path_edges = j.at("longest_path_edges").get<uint32_t>();
    b.ratio_lower = detail::opt_from_json(j, "ratio_lower");
    b.ratio_upper = detail::opt_from_json(j, "ratio_upper");
    b.edge_count = j.value("edge_count", uint64_t{0});
    return b;
}

inline json to_json(const BlockMetricsRecord& r) {
    json graphs = json::object();
    for (const auto& [slot, block] : r.graphs) graphs[slot] = to_json(block);

    json causes = json::object();
    for (Cause c : kAllCauses) {
        auto it = r.ww_cause_counts.find(c);
        causes[to_string(c)] = it == r.ww_cause_counts.end() ? 0 : it->second;
    }

    json address_causes = json::object();
    for (const auto& [addr, counts] : r.ww_address_causes) {
        address_causes[addr.to_hex()] = json{{"balance", counts.balance},
                                             {"nonce", counts.nonce},
                                             {"storage", counts.storage},
                                             {"code", counts.code}};
    }

    json tree = json(nullptr);
    if (r.call_tree_means) {
        tree = json{{"node_count", r.call_tree_means->node_count},
                    {"height", r.call_tree_means->height},
                    {"mean_degree", r.call_tree_means->mean_degree},
                    {"leaf_count", r.call_tree_means->leaf_count}};
    }

    return json{{"schema_version", r.schema_version},
                {"block_number", r.block_number},
                {"tx_count", r.tx_count},
                {"value_transfer_ratio", r.value_transfer_ratio},
                {"call_tree_means", std::move(tree)},
                {"graphs", std::move(graphs)},
                {"ww_cause_counts", std::move(causes)},
                {"ww_address_causes", std::move(address_causes)}};
}

inline BlockMetricsRecord record_from_json(const json& j) {
    if (!j.contains("schema_version")) {
        throw SchemaVersionError("record lacks schema_version");
    }
    int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
        throw SchemaVersionError("unsupported schema version " + std::to_string(version) +
                                 " (expected " + std::to_string(kSchemaVersion) + ")");
    }
    BlockMetricsRecord r;
    r.schema_version = version;
    r.block_number = j.at("block_number").get<uint64_t>();
    r.tx_count = j.at("tx_count").get<uint64_t>();
    r.value_transfer_ratio = j.at("value_transfer_ratio").get<double>();
    if (auto it = j.find("call_tree_means"); it != j.end() && !it->is_null()) {
        r.call_tree_means = TreeMetricMeans{it->at("node_count").get<double>(),
                                            it->at("height").get<double>(),
                                            it->at("mean_degree").get<double>(),
                                            it->at("leaf_count").get<double>()};
    }
    if (auto it = j.find("graphs"); it != j.end()) {
        for (const auto& [slot, block] : it->items()) {
            r.graphs[slot] = graph_block_from_json(block);
        }
    }
    if (auto it = j.find("ww_cause_counts"); it != j.end()) {
        for (Cause c : kAllCauses) {
            if (auto cit = it->find(to_string(c)); cit != it->end()) {
                r.ww_cause_counts[c] = cit->get<uint64_t>();
            }
        }
    }
    if (auto it = j.find("ww_address_causes"); it != j.end()) {
        for (const auto& [addr, counts] : it->items()) {
            CauseCounts c;
            c.balance = counts.value("balance", uint64_t{0});
            c.nonce = counts.value("nonce", uint64_t{0});
            c.storage = counts.value("storage", uint64_t{0});
            c.code = counts.value("code", uint64_t{0});
            r.ww_address_causes[Address::from_hex(addr)] = c;
        }
    }
    return r;
}

// Append-only writer for the line-delimited record stream.
class RecordWriter {
  public:
    explicit RecordWriter(const std::filesystem::path& path) : writer_(make(path)) {}

    void append(const BlockMetricsRecord& record) { writer_.write_line(to_json(record).dump()); }

    void close() { writer_.close(); }

  private:
    static GzWriter make(const std::filesystem::path& path) {
        if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
        return GzWriter(path);
    }
    GzWriter writer_;
};

inline void write_records(const std::filesystem::path& path,
                          const std::vector<BlockMetricsRecord>& records) {
    RecordWriter writer(path);
    for (const BlockMetricsRecord& r : records) writer.append(r);
    writer.close();
}

inline std::vector<BlockMetricsRecord> read_records(const std::filesystem::path& path) {
    GzReader reader(path);
    std::vector<BlockMetricsRecord> records;
    std::size_t line_number = 0;
    while (auto line = reader.read_line()) {
        ++line_number;
        if (line->empty()) continue;
        json j = json::parse(*line, nullptr, false);
        if (j.is_discarded()) {
            throw CorruptRecordError(line_number, "invalid JSON");
        }
        try {
            records.push_back(record_from_json(j));
        } catch (const SchemaVersionError&) {
            throw;
        } catch (const std::exception& e) {
            throw CorruptRecordError(line_number, e.what());
        }
    }
    return records;
}

}  // namespace ethcg
