// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ethcg/bytes.hpp"
#include "ethcg/errors.hpp"
#include "ethcg/store.hpp"

namespace ethcg {

struct RetryPolicy {
    std::chrono::milliseconds base_delay{1000};
    double factor = 2.0;
    int max_attempts = 5;
};

struct RpcClientOptions {
    std::string endpoint;
    std::chrono::seconds timeout{120};
    RetryPolicy retry;
};

namespace detail {

struct EndpointParts {
    std::string base;  // scheme://host:port
    std::string path;  // request path, default /
};

inline EndpointParts split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: '" + url + "'");
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

inline json tracer_config(TracerKind kind) {
    switch (kind) {
        case TracerKind::Call:
            return json{{"tracer", "callTracer"}};
        case TracerKind::Prestate:
            return json{{"tracer", "prestateTracer"}};
        case TracerKind::PrestateDiff:
            return json{{"tracer", "prestateTracer"},
                        {"tracerConfig", json{{"diffMode", true}}}};
    }
    return json::object();
}

}  // namespace detail

// The JSON-RPC request body for one debug_traceBlockByNumber call.
inline std::string trace_request_body(uint64_t block_number, TracerKind kind) {
    json body{{"jsonrpc", "2.0"},
              {"id", 1},
              {"method", "debug_traceBlockByNumber"},
              {"params", json::array({to_hex_quantity(block_number),
                                      detail::tracer_config(kind)})}};
    return body.dump();
}

// Issues debug_traceBlockByNumber and returns the response body verbatim for
// archival. Transport failures retry with exponential backoff; RPC error
// objects surface immediately ("method not found" as a configuration error).
inline std::string trace_block(const RpcClientOptions& options, uint64_t block_number,
                               TracerKind kind) {
    auto [base, path] = detail::split_endpoint(options.endpoint);
    std::string request = trace_request_body(block_number, kind);

    std::string last_error;
    auto delay = options.retry.base_delay;
    for (int attempt = 1; attempt <= options.retry.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(delay);
            delay = std::chrono::milliseconds(
                static_cast<int64_t>(static_cast<double>(delay.count()) * options.retry.factor));
        }
        httplib::Client client(base);
        client.set_connection_timeout(options.timeout);
        client.set_read_timeout(options.timeout);
        client.set_write_timeout(options.timeout);
        httplib::Result res = client.Post(path, request, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        json doc = json::parse(res->body, nullptr, false);
        if (doc.is_discarded()) {
            last_error = "unparseable response body";
            continue;
        }
        if (auto it = doc.find("error"); it != doc.end() && it->is_object()) {
            int code = it->value("code", 0);
            std::string message = it->value("message", std::string("unknown rpc error"));
            if (code == -32601) {
                throw ConfigError("node does not support debug tracing: " + message);
            }
            throw RpcError(code, message);
        }
        if (!doc.contains("result")) {
            last_error = "response lacks result";
            continue;
        }
        return res->body;
    }
    throw RpcTransportError("block " + std::to_string(block_number) + " (" + to_string(kind) +
                            "): " + std::to_string(options.retry.max_attempts) +
                            " attempts failed, last error: " + last_error);
}

// Where trace documents come from: a live node or an already-archived
// directory (offline fixture mode).
class TraceSource {
  public:
    virtual ~TraceSource() = default;
    virtual std::string fetch(uint64_t block_number, TracerKind kind) = 0;
};

class RpcTraceSource final : public TraceSource {
  public:
    explicit RpcTraceSource(RpcClientOptions options) : options_(std::move(options)) {}

    std::string fetch(uint64_t block_number, TracerKind kind) override {
        return trace_block(options_, block_number, kind);
    }

  private:
    RpcClientOptions options_;
};

class DirTraceSource final : public TraceSource {
  public:
    explicit DirTraceSource(std::filesystem::path root) : root_(std::move(root)) {}

    std::string fetch(uint64_t block_number, TracerKind kind) override {
        return load_raw_trace(root_, block_number, kind);
    }

  private:
    std::filesystem::path root_;
};

struct FetchJob {
    uint64_t start = 0;  // inclusive
    uint64_t end = 0;    // exclusive
    std::vector<TracerKind> tracers;
    std::string endpoint;
    std::filesystem::path out_root;
    std::filesystem::path checkpoint_path;
    int concurrency = 4;
    std::chrono::seconds timeout{120};
    RetryPolicy retry;
    // When set, trace documents are read from this archive instead of the
    // network (offline mode).
    std::optional<std::filesystem::path> fixture_dir;
};

struct FetchStats {
    uint64_t fetched = 0;
    uint64_t skipped_done = 0;
    uint64_t failed = 0;
};

namespace detail {

inline std::optional<uint64_t> read_checkpoint(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path);
    std::string text;
    in >> text;
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw IoError("corrupt checkpoint file: " + path.string());
    }
    return std::stoull(text);
}

// Durable write: temp file + rename. Never lowers an existing checkpoint.
inline void write_checkpoint(const std::filesystem::path& path, uint64_t next_block) {
    auto current = read_checkpoint(path);
    if (current && *current >= next_block) return;
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write checkpoint: " + tmp.string());
        out << next_block << '\n';
    }
    std::filesystem::rename(tmp, path);
}

inline void log_failure(const std::filesystem::path& out_root, uint64_t block,
                        const std::string& reason) {
    std::filesystem::create_directories(out_root);
    std::ofstream log(out_root / "failures.log", std::ios::app);
    log << "block=" << block << " error=\"" << reason << "\"\n";
}

}  // namespace detail

// Fetches every requested tracer for each block in range, archives the raw
// bodies, and advances the checkpoint after each block's durable writes.
// Per-block failures are logged and skipped; configuration errors abort.
inline FetchStats run_fetch_job(const FetchJob& job, TraceSource* source_override = nullptr) {
    if (job.start >= job.end) throw InvalidArgumentError("block range must satisfy start < end");
    if (job.tracers.empty()) throw InvalidArgumentError("at least one tracer is required");
    if (job.concurrency < 1) throw InvalidArgumentError("concurrency must be at least 1");

    std::unique_ptr<TraceSource> owned;
    TraceSource* source = source_override;
    if (!source) {
        if (job.fixture_dir) {
            owned = std::make_unique<DirTraceSource>(*job.fixture_dir);
        } else {
            if (job.endpoint.empty()) throw ConfigError("no RPC endpoint configured");
            owned = std::make_unique<RpcTraceSource>(
                RpcClientOptions{job.endpoint, job.timeout, job.retry});
        }
        source = owned.get();
    }

    FetchStats stats;
    uint64_t resume_from = job.start;
    if (auto checkpoint = detail::read_checkpoint(job.checkpoint_path)) {
        resume_from = std::max(resume_from, *checkpoint);
    }
    stats.skipped_done = resume_from > job.start ? resume_from - job.start : 0;

    // One task per block; a sliding window of size `concurrency` keeps blocks
    // in flight while commits (archive + checkpoint) happen in block order.
    struct BlockResult {
        uint64_t block;
        std::vector<std::pair<TracerKind, std::string>> bodies;
        std::string error;
        bool fatal = false;
    };
    auto fetch_block = [&](uint64_t block) -> BlockResult {
        BlockResult result;
        result.block = block;
        try {
            for (TracerKind kind : job.tracers) {
                result.bodies.emplace_back(kind, source->fetch(block, kind));
            }
        } catch (const ConfigError& e) {
            result.error = e.what();
            result.fatal = true;
        } catch (const std::exception& e) {
            result.error = e.what();
        }
        return result;
    };

    std::deque<std::future<BlockResult>> in_flight;
    uint64_t next_to_launch = resume_from;
    auto launch = [&] {
        while (next_to_launch < job.end &&
               in_flight.size() < static_cast<std::size_t>(job.concurrency)) {
            in_flight.push_back(
                std::async(std::launch::async, fetch_block, next_to_launch));
            ++next_to_launch;
        }
    };
    launch();
    while (!in_flight.empty()) {
        BlockResult result = in_flight.front().get();
        in_flight.pop_front();
        if (result.fatal) {
            for (auto& f : in_flight) f.wait();
            throw ConfigError(result.error);
        }
        if (!result.error.empty()) {
            detail::log_failure(job.out_root, result.block, result.error);
            std::cerr << "level=warn block=" << result.block << " msg=\"fetch failed, skipping\""
                      << " error=\"" << result.error << "\"\n";
            ++stats.failed;
        } else {
            for (const auto& [kind, body] : result.bodies) {
                archive_raw_trace(job.out_root, result.block, kind, body);
            }
            ++stats.fetched;
        }
        detail::write_checkpoint(job.checkpoint_path, result.block + 1);
        launch();
    }
    return stats;
}

}  // namespace ethcg
