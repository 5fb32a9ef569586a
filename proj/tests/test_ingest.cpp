// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "ethcg/ingest.hpp"
#include "ethcg/store.hpp"

using namespace ethcg;

namespace {

RetryPolicy fast_retry() {
    RetryPolicy policy;
    policy.base_delay = std::chrono::milliseconds(1);
    policy.factor = 2.0;
    policy.max_attempts = 5;
    return policy;
}

// Local JSON-RPC stub: serves canned trace documents, optionally failing the
// first N requests.
class StubNode {
  public:
    explicit StubNode(int fail_first = 0) : fail_remaining_(fail_first) {
        server_.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            last_body_ = req.body;
            last_path_ = req.path;
            if (fail_remaining_ > 0) {
                --fail_remaining_;
                res.status = 503;
                res.set_content("overloaded", "text/plain");
                return;
            }
            json doc = json::parse(req.body);
            if (doc.at("method") != "debug_traceBlockByNumber") {
                res.set_content(
                    R"({"jsonrpc":"2.0","id":1,"error":{"code":-32601,"message":"the method is not available"}})",
                    "application/json");
                return;
            }
            if (rpc_error_) {
                res.set_content(*rpc_error_, "application/json");
                return;
            }
            std::string tag = doc.at("params").at(0).get<std::string>();
            uint64_t block = parse_u64_quantity(tag);
            json result = json::array();
            if (block != 0) {  // genesis stays empty
                result.push_back(json{{"result",
                                       json{{"type", "CALL"},
                                            {"from", "0x1111111111111111111111111111111111111111"},
                                            {"to", "0x2222222222222222222222222222222222222222"},
                                            {"gas", "0x5208"},
                                            {"gasUsed", "0x5208"},
                                            {"input", "0x"}}}});
            }
            json body{{"jsonrpc", "2.0"}, {"id", 1}, {"result", result}};
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubNode() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int requests() const { return requests_; }
    std::string last_body() const { return last_body_; }
    std::string last_path() const { return last_path_; }
    void set_rpc_error(const std::string& body) { rpc_error_ = body; }

  private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> fail_remaining_;
    std::atomic<int> requests_{0};
    std::string last_body_;
    std::string last_path_;
    std::optional<std::string> rpc_error_;
};

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("ethcg_ingest_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("trace requests carry the hex block tag and tracer config") {
    CHECK(trace_request_body(20700000, TracerKind::Call) ==
          R"({"id":1,"jsonrpc":"2.0","method":"debug_traceBlockByNumber","params":["0x13bdb60",{"tracer":"callTracer"}]})");
    json diff = json::parse(trace_request_body(1, TracerKind::PrestateDiff));
    CHECK(diff["params"][1]["tracer"] == "prestateTracer");
    CHECK(diff["params"][1]["tracerConfig"]["diffMode"] == true);
    json flat = json::parse(trace_request_body(1, TracerKind::Prestate));
    CHECK(flat["params"][1] == json{{"tracer", "prestateTracer"}});
}

TEST_CASE("trace_block returns the response body verbatim") {
    StubNode node;
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    std::string body = trace_block(options, 7, TracerKind::Call);
    json doc = json::parse(body);
    CHECK(doc["result"].size() == 1);
    json request = json::parse(node.last_body());
    CHECK(request["params"][0] == "0x7");
}

TEST_CASE("endpoints with a path route to that path") {
    StubNode node;
    RpcClientOptions options{node.endpoint() + "/rpc/v1", std::chrono::seconds(5), fast_retry()};
    std::string body = trace_block(options, 3, TracerKind::Call);
    CHECK_FALSE(body.empty());
    CHECK(node.last_path() == "/rpc/v1");
    CHECK_THROWS_AS(
        trace_block({"no-scheme-here", std::chrono::seconds(5), fast_retry()}, 1, TracerKind::Call),
        ConfigError);
}

TEST_CASE("genesis traces to an empty transaction list") {
    StubNode node;
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    std::string body = trace_block(options, 0, TracerKind::Call);
    CHECK(parse_call_trace(body).empty());
}

TEST_CASE("transport failures retry with backoff until success") {
    StubNode node(/*fail_first=*/2);
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    std::string body = trace_block(options, 5, TracerKind::Prestate);
    CHECK_FALSE(body.empty());
    CHECK(node.requests() == 3);
}

TEST_CASE("persistent transport failure raises after max attempts") {
    StubNode node(/*fail_first=*/100);
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    CHECK_THROWS_AS(trace_block(options, 5, TracerKind::Call), RpcTransportError);
    CHECK(node.requests() == 5);
}

TEST_CASE("rpc error objects surface code and message without retry") {
    StubNode node;
    node.set_rpc_error(
        R"({"jsonrpc":"2.0","id":1,"error":{"code":-32000,"message":"header not found"}})");
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    try {
        trace_block(options, 5, TracerKind::Call);
        FAIL("expected RpcError");
    } catch (const RpcError& e) {
        CHECK(e.code == -32000);
        CHECK(std::string(e.what()).find("header not found") != std::string::npos);
    }
    CHECK(node.requests() == 1);
}

TEST_CASE("a node without the debug API is a configuration error") {
    StubNode node;
    node.set_rpc_error(
        R"({"jsonrpc":"2.0","id":1,"error":{"code":-32601,"message":"the method debug_traceBlockByNumber does not exist"}})");
    RpcClientOptions options{node.endpoint(), std::chrono::seconds(5), fast_retry()};
    CHECK_THROWS_AS(trace_block(options, 5, TracerKind::Call), ConfigError);
}

TEST_CASE("fetch jobs archive every tracer and advance the checkpoint") {
    StubNode node;
    auto out = temp_dir("job");
    FetchJob job;
    job.start = 100;
    job.end = 103;
    job.tracers = {TracerKind::Call, TracerKind::Prestate, TracerKind::PrestateDiff};
    job.endpoint = node.endpoint();
    job.out_root = out;
    job.checkpoint_path = out / "checkpoint";
    job.retry = fast_retry();
    FetchStats stats = run_fetch_job(job);
    CHECK(stats.fetched == 3);
    CHECK(stats.failed == 0);
    for (uint64_t block : {100, 101, 102}) {
        for (TracerKind kind : kAllTracers) CHECK(has_raw_trace(out, block, kind));
    }
    std::ifstream checkpoint(out / "checkpoint");
    uint64_t next = 0;
    checkpoint >> next;
    CHECK(next == 103);
    CHECK(node.requests() == 9);
}

TEST_CASE("resume refetches only blocks past the checkpoint") {
    StubNode node;
    auto out = temp_dir("resume");
    FetchJob job;
    job.start = 100;
    job.end = 103;
    job.tracers = {TracerKind::Call};
    job.endpoint = node.endpoint();
    job.out_root = out;
    job.checkpoint_path = out / "checkpoint";
    job.retry = fast_retry();
    {
        std::ofstream c(job.checkpoint_path);
        c << 101 << '\n';
    }
    FetchStats stats = run_fetch_job(job);
    CHECK(stats.fetched == 2);
    CHECK(stats.skipped_done == 1);
    CHECK(node.requests() == 2);

    // Completed jobs are idempotent: nothing new is fetched.
    FetchStats again = run_fetch_job(job);
    CHECK(again.fetched == 0);
    CHECK(again.skipped_done == 3);
    CHECK(node.requests() == 2);
}

TEST_CASE("per-block failures are logged and skipped") {
    StubNode node(/*fail_first=*/5);  // exhausts retries for the first block only
    auto out = temp_dir("failures");
    FetchJob job;
    job.start = 200;
    job.end = 202;
    job.tracers = {TracerKind::Call};
    job.endpoint = node.endpoint();
    job.out_root = out;
    job.checkpoint_path = out / "checkpoint";
    job.concurrency = 1;
    job.retry = fast_retry();
    FetchStats stats = run_fetch_job(job);
    CHECK(stats.fetched == 1);
    CHECK(stats.failed == 1);
    CHECK_FALSE(has_raw_trace(out, 200, TracerKind::Call));
    CHECK(has_raw_trace(out, 201, TracerKind::Call));
    std::ifstream log(out / "failures.log");
    std::string line;
    REQUIRE(std::getline(log, line));
    CHECK(line.find("block=200") != std::string::npos);
}

TEST_CASE("offline fixture mode yields the same archive as live mode") {
    StubNode node;
    auto live = temp_dir("live");
    FetchJob job;
    job.start = 300;
    job.end = 302;
    job.tracers = {TracerKind::Call, TracerKind::Prestate};
    job.endpoint = node.endpoint();
    job.out_root = live;
    job.checkpoint_path = live / "checkpoint";
    job.retry = fast_retry();
    run_fetch_job(job);

    auto offline = temp_dir("offline");
    FetchJob replay = job;
    replay.endpoint.clear();
    replay.out_root = offline;
    replay.checkpoint_path = offline / "checkpoint";
    replay.fixture_dir = live;
    FetchStats stats = run_fetch_job(replay);
    CHECK(stats.fetched == 2);
    for (uint64_t block : {300, 301}) {
        CHECK(load_raw_trace(offline, block, TracerKind::Call) ==
              load_raw_trace(live, block, TracerKind::Call));
        CHECK(load_raw_trace(offline, block, TracerKind::Prestate) ==
              load_raw_trace(live, block, TracerKind::Prestate));
    }
}

TEST_CASE("checkpoints never move backwards") {
    auto dir = temp_dir("monotonic");
    auto path = dir / "checkpoint";
    detail::write_checkpoint(path, 50);
    detail::write_checkpoint(path, 10);
    CHECK(detail::read_checkpoint(path) == 50);
    std::ofstream(path) << "garbage";
    CHECK_THROWS_AS(detail::read_checkpoint(path), IoError);
}

TEST_CASE("invalid jobs are rejected up front") {
    FetchJob job;
    job.start = 5;
    job.end = 5;
    job.tracers = {TracerKind::Call};
    CHECK_THROWS_AS(run_fetch_job(job), InvalidArgumentError);
    job.end = 6;
    job.tracers.clear();
    CHECK_THROWS_AS(run_fetch_job(job), InvalidArgumentError);
    job.tracers = {TracerKind::Call};
    CHECK_THROWS_AS(run_fetch_job(job), ConfigError);  // no endpoint, no fixture dir
}
