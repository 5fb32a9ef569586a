// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: fetch traces from an archive node, analyze them
// into per-block metric records, aggregate reports, run the scheduling
// simulator, and generate synthetic workloads.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ethcg/analyze.hpp"
#include "ethcg/ingest.hpp"
#include "ethcg/report.hpp"
#include "ethcg/schedule_sim.hpp"
#include "ethcg/synth.hpp"

namespace {

using namespace ethcg;

void log_info(const std::string& msg) { std::cerr << "level=info msg=\"" << msg << "\"\n"; }
void log_error(const std::string& msg) { std::cerr << "level=error msg=\"" << msg << "\"\n"; }

std::vector<TracerKind> parse_tracers(const std::string& list) {
    if (list == "all") {
        return {TracerKind::Call, TracerKind::Prestate, TracerKind::PrestateDiff};
    }
    std::vector<TracerKind> kinds;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) kinds.push_back(tracer_kind_from_string(item));
    }
    if (kinds.empty()) throw UsageError("--tracers must name at least one tracer");
    return kinds;
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::filesystem::path p(*path);
    if (!p.parent_path().empty()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + *path);
    out << content;
}

int cmd_fetch(const std::string& rpc_url, uint64_t from, uint64_t to, const std::string& tracers,
              const std::string& out, const std::string& checkpoint, int concurrency,
              int timeout_s, const std::string& fixture_dir) {
    FetchJob job;
    job.start = from;
    job.end = to;
    job.tracers = parse_tracers(tracers);
    job.out_root = out;
    job.checkpoint_path = checkpoint.empty() ? std::filesystem::path(out) / "checkpoint"
                                             : std::filesystem::path(checkpoint);
    job.concurrency = concurrency;
    job.timeout = std::chrono::seconds(timeout_s);
    if (!fixture_dir.empty()) {
        job.fixture_dir = fixture_dir;
    } else {
        job.endpoint = rpc_url;
        if (job.endpoint.empty()) {
            if (const char* env = std::getenv("ETH_RPC_URL")) job.endpoint = env;
        }
        if (job.endpoint.empty()) {
            throw UsageError("no endpoint: pass --rpc-url or set ETH_RPC_URL");
        }
    }
    FetchStats stats = run_fetch_job(job);
    log_info("fetched " + std::to_string(stats.fetched) + " blocks, skipped " +
             std::to_string(stats.skipped_done) + " done, " + std::to_string(stats.failed) +
             " failed-and-logged");
    return 0;
}

int cmd_analyze(const std::string& traces, const std::string& method, const std::string& mode,
                uint64_t seed, uint32_t mc_starts, std::string out, unsigned jobs) {
    AnalyzeOptions opts;
    opts.method_prestate = method == "prestate" || method == "both";
    opts.method_calltracer = method == "calltracer" || method == "both";
    opts.mode_rw = mode == "rw" || mode == "both";
    opts.mode_all = mode == "all" || mode == "both";
    opts.seed = seed;
    opts.mc_starts = mc_starts;

    std::filesystem::path root(traces);
    std::vector<uint64_t> blocks = list_archived_blocks(root);
    if (blocks.empty()) {
        log_error("no archived blocks under " + root.string());
        return 1;
    }
    if (out.empty()) out = records_path(root).string();

    auto analyze_one = [&](uint64_t block) -> std::optional<BlockMetricsRecord> {
        try {
            for (TracerKind kind : kAllTracers) {
                if (!has_raw_trace(root, block, kind)) {
                    throw MissingDataError("missing " + to_string(kind) + " trace");
                }
            }
            return analyze_block(load_block_trace(root, block), opts);
        } catch (const std::exception& e) {
            std::cerr << "level=error block=" << block << " msg=\"analyze failed, skipping\""
                      << " error=\"" << e.what() << "\"\n";
            return std::nullopt;
        }
    };

    std::vector<std::optional<BlockMetricsRecord>> records(blocks.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < blocks.size(); ++i) records[i] = analyze_one(blocks[i]);
    } else {
        std::size_t next = 0;
        std::vector<std::future<void>> workers;
        std::mutex mutex;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.push_back(std::async(std::launch::async, [&] {
                while (true) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mutex);
                        if (next >= blocks.size()) return;
                        i = next++;
                    }
                    records[i] = analyze_one(blocks[i]);
                }
            }));
        }
        for (auto& worker : workers) worker.get();
    }

    RecordWriter writer(out);
    std::size_t written = 0;
    for (const auto& record : records) {
        if (record) {
            writer.append(*record);
            ++written;
        }
    }
    writer.close();
    log_info("wrote " + std::to_string(written) + " records to " + out);
    return written == blocks.size() ? 0 : 1;
}

int cmd_report(const std::string& records_file, const std::string& out_dir, uint64_t bucket_width,
               std::size_t groups, double band) {
    std::vector<BlockMetricsRecord> records = read_records(records_file);
    ReportOptions opts;
    opts.bucket_width = bucket_width;
    opts.groups = groups;
    opts.band = band;
    auto files = emit_report(records, out_dir, opts);
    log_info("wrote " + std::to_string(files.size()) + " report files to " + out_dir);
    return 0;
}

int cmd_sim(const std::string& traces, const std::string& records_file, const std::string& weights,
            const std::string& method, const std::string& mode, uint32_t workers,
            const std::optional<std::string>& out) {
    if (traces.empty() == records_file.empty()) {
        throw UsageError("pass exactly one of --traces or --records");
    }
    RwMethod rw_method = method == "calltracer" ? RwMethod::CallTracer : RwMethod::Prestate;
    ConflictMode conflict_mode = mode == "all" ? ConflictMode::All : ConflictMode::RW;

    std::string csv;
    if (!traces.empty()) {
        WeightKind kind = weights == "unit" ? WeightKind::Unit : WeightKind::Gas;
        csv = "block_number,tx_count,sequential_time,order_makespan,coloring_makespan,"
              "colors_used,order_speedup,coloring_speedup,coloring_vs_order\n";
        std::filesystem::path root(traces);
        for (uint64_t block_number : list_archived_blocks(root)) {
            BlockTrace block = load_block_trace(root, block_number);
            ConflictGraph graph = block_conflict_graph(block, rw_method, conflict_mode);
            Workload workload = make_workload(graph, block, kind);
            SpeedupReport r = speedup_report(workload, workers);
            auto opt = [](const std::optional<double>& v) {
                return v ? fmt_double(*v) : std::string();
            };
            csv += std::to_string(block_number) + "," + std::to_string(graph.num_nodes) + "," +
                   fmt_double(r.sequential_time) + "," + fmt_double(r.order_makespan) + "," +
                   fmt_double(r.coloring_makespan) + "," + std::to_string(r.colors_used) + "," +
                   opt(r.order_speedup) + "," + opt(r.coloring_speedup) + "," +
                   opt(r.coloring_vs_order) + "\n";
        }
    } else {
        // Structural parallelism bounds straight from stored metrics.
        std::string slot = graph_slot_name(rw_method, conflict_mode);
        csv = "block_number,tx_count,greedy_colors,longest_path_edges,ratio_lower,ratio_upper\n";
        for (const BlockMetricsRecord& r : read_records(records_file)) {
            auto it = r.graphs.find(slot);
            if (it == r.graphs.end()) continue;
            auto opt = [](const std::optional<double>& v) {
                return v ? fmt_double(*v) : std::string();
            };
            csv += std::to_string(r.block_number) + "," + std::to_string(r.tx_count) + "," +
                   std::to_string(it->second.greedy_colors) + "," +
                   std::to_string(it->second.longest_path_edges) + "," +
                   opt(it->second.ratio_lower) + "," + opt(it->second.ratio_upper) + "\n";
        }
    }
    write_output(out, csv);
    return 0;
}

int cmd_synth(const std::string& kind, uint32_t n, double p, uint32_t hub_degree, uint64_t seed,
              const std::optional<std::string>& out, const std::optional<std::string>& graph_out) try {
    auto edge_list_text = [](const ConflictGraph& g) {
        std::ostringstream os;
        write_edge_list(os, g);
        return os.str();
    };
    if (kind == "star") {
        write_output(out, edge_list_text(synth_star(n)));
    } else if (kind == "gnp") {
        write_output(out, edge_list_text(synth_gnp(n, p, seed)));
    } else if (kind == "hotspot") {
        std::vector<AccessSets> sets = synth_hotspot(n, hub_degree, seed);
        std::string jsonl;
        for (const AccessSets& s : sets) jsonl += to_json(s).dump() + "\n";
        write_output(out, jsonl);
        if (graph_out) {
            write_output(graph_out, edge_list_text(build_conflict_graph(sets, ConflictMode::RW)));
        }
    } else {
        throw UsageError("unknown --kind '" + kind + "' (star, gnp, hotspot)");
    }
    return 0;
} catch (const InvalidArgumentError& e) {
    // Bad parameter combinations are usage errors at the CLI surface.
    throw UsageError(e.what());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ethereum block-trace conflict graph toolkit"};
    app.require_subcommand(1);

    // fetch
    auto* fetch = app.add_subcommand("fetch", "Fetch block traces over JSON-RPC");
    std::string rpc_url, tracers = "all", fetch_out = "data", checkpoint, fixture_dir;
    uint64_t from = 0, to = 0;
    int concurrency = 4, timeout_s = 120;
    fetch->add_option("--rpc-url", rpc_url, "JSON-RPC endpoint (or env ETH_RPC_URL)");
    fetch->add_option("--from", from, "first block (inclusive)")->required();
    fetch->add_option("--to", to, "last block (exclusive)")->required();
    fetch->add_option("--tracers", tracers, "all or comma list of call,prestate,prestate_diff");
    fetch->add_option("--out", fetch_out, "data root directory");
    fetch->add_option("--checkpoint", checkpoint, "checkpoint file (default <out>/checkpoint)");
    fetch->add_option("--concurrency", concurrency, "blocks in flight");
    fetch->add_option("--timeout", timeout_s, "request timeout in seconds");
    fetch->add_option("--fixture-dir", fixture_dir, "offline mode: read traces from this archive");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Compute per-block metric records");
    std::string traces, method = "both", mode = "both", analyze_out;
    uint64_t seed = 42;
    uint32_t mc_starts = 1000;
    unsigned jobs = 1;
    analyze->add_option("--traces", traces, "data root with archived traces")->required();
    analyze->add_option("--method", method, "prestate, calltracer, or both")
        ->check(CLI::IsMember({"prestate", "calltracer", "both"}));
    analyze->add_option("--mode", mode, "rw, all, or both")
        ->check(CLI::IsMember({"rw", "all", "both"}));
    analyze->add_option("--seed", seed, "Monte Carlo seed");
    analyze->add_option("--mc-starts", mc_starts, "longest-path starts per component");
    analyze->add_option("--out", analyze_out, "records file (default <traces>/metrics/records.jsonl.gz)");
    analyze->add_option("--jobs", jobs, "parallel workers across blocks");

    // report
    auto* report = app.add_subcommand("report", "Aggregate records into CSV/SVG reports");
    std::string records_file, report_dir = "reports";
    uint64_t bucket_width = 8;
    std::size_t groups = 4;
    double band = 5.0;
    report->add_option("--records", records_file, "records.jsonl.gz file")->required();
    report->add_option("--out-dir", report_dir, "output directory");
    report->add_option("--bucket-width", bucket_width, "block-size histogram bucket width");
    report->add_option("--groups", groups, "tx-count quantile groups");
    report->add_option("--band", band, "percentile band width");

    // sim
    auto* sim = app.add_subcommand("sim", "Block-order vs coloring schedule comparison");
    std::string sim_traces, sim_records, weights = "gas", sim_method = "prestate",
                sim_mode = "rw";
    uint32_t sim_workers = 0;
    std::optional<std::string> sim_out;
    sim->add_option("--traces", sim_traces, "data root with archived traces");
    sim->add_option("--records", sim_records, "records file for structural bounds");
    sim->add_option("--weights", weights, "gas or unit")
        ->check(CLI::IsMember({"gas", "unit"}));
    sim->add_option("--method", sim_method, "prestate or calltracer")
        ->check(CLI::IsMember({"prestate", "calltracer"}));
    sim->add_option("--mode", sim_mode, "rw or all")->check(CLI::IsMember({"rw", "all"}));
    sim->add_option("--workers", sim_workers, "bounded list-scheduling workers (0 = unbounded)");
    sim->add_option("--out", sim_out, "output CSV (default stdout)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic workloads");
    std::string kind = "star";
    uint32_t n = 10, hub_degree = 0;
    double p = 0.1;
    uint64_t synth_seed = 1;
    std::optional<std::string> synth_out, synth_graph_out;
    synth->add_option("--kind", kind, "star, gnp, or hotspot")
        ->check(CLI::IsMember({"star", "gnp", "hotspot"}));
    synth->add_option("--n", n, "node/transaction count");
    synth->add_option("--p", p, "edge probability (gnp)");
    synth->add_option("--hub-degree", hub_degree, "reader count (hotspot)");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output file (default stdout)");
    synth->add_option("--graph-out", synth_graph_out, "also write the derived edge list (hotspot)");

    try {
        app.parse(argc, argv);
        if (fetch->parsed()) {
            return cmd_fetch(rpc_url, from, to, tracers, fetch_out, checkpoint, concurrency,
                             timeout_s, fixture_dir);
        }
        if (analyze->parsed()) {
            return cmd_analyze(traces, method, mode, seed, mc_starts, analyze_out, jobs);
        }
        if (report->parsed()) {
            return cmd_report(records_file, report_dir, bucket_width, groups, band);
        }
        if (sim->parsed()) {
            return cmd_sim(sim_traces, sim_records, weights, sim_method, sim_mode, sim_workers,
                           sim_out);
        }
        if (synth->parsed()) {
            return cmd_synth(kind, n, p, hub_degree, synth_seed, synth_out, synth_graph_out);
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        log_error(e.what());
        return 2;
    } catch (const std::exception& e) {
        log_error(e.what());
        return 1;
    }
    return 0;
}
