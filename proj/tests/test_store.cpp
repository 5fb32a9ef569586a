// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "ethcg/gzio.hpp"
#include "ethcg/store.hpp"
#include "generators.hpp"

using namespace ethcg;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("ethcg_store_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

BlockMetricsRecord sample_record(uint64_t block) {
    BlockMetricsRecord r;
    r.block_number = block;
    r.tx_count = 100 + block;
    r.value_transfer_ratio = 0.5;
    r.call_tree_means = TreeMetricMeans{10.0, 3.5, 1.7, 6.0};
    GraphMetricsBlock g;
    g.density = 0.021;
    g.diameter = 3;
    g.mean_degree = 2.5;
    g.max_degree = 42;
    g.assortativity = -0.8;
    g.largest_cc = 90;
    g.component_count = 11;
    g.greedy_colors = 3;
    g.clique_number = 3;
    g.longest_path_edges = 17;
    g.ratio_lower = 6.0;
    g.ratio_upper = 30.0;
    g.edge_count = 123;
    r.graphs["prestate_rw"] = g;
    g.assortativity = std::nullopt;  // exercise the nullable encoding
    g.ratio_lower = std::nullopt;
    r.graphs["calltracer_all"] = g;
    r.ww_cause_counts = {{Cause::Balance, 97}, {Cause::Storage, 2}, {Cause::Nonce, 1},
                         {Cause::Code, 0}};
    r.ww_address_causes[generators::addr(7)] = CauseCounts{90, 1, 2, 0};
    return r;
}

}  // namespace

TEST_CASE("records round-trip field by field") {
    auto dir = temp_dir("roundtrip");
    auto path = dir / "records.jsonl.gz";
    std::vector<BlockMetricsRecord> records = {sample_record(1), sample_record(2),
                                               sample_record(3)};
    write_records(path, records);
    auto back = read_records(path);
    REQUIRE(back.size() == 3);
    CHECK(back == records);
    CHECK_FALSE(back[0].graphs.at("calltracer_all").assortativity.has_value());
    CHECK(back[0].graphs.at("prestate_rw").assortativity == -0.8);
}

TEST_CASE("corrupt lines are reported with their line number") {
    auto dir = temp_dir("corrupt");
    auto path = dir / "records.jsonl.gz";
    {
        GzWriter w(path);
        w.write_line(to_json(sample_record(1)).dump());
        w.write_line(R"({"schema_version":1,"block_number")");  // truncated JSON
        w.close();
    }
    try {
        read_records(path);
        FAIL("expected CorruptRecordError");
    } catch (const CorruptRecordError& e) {
        CHECK(e.line_number == 2);
    }
}

TEST_CASE("unknown fields are ignored, missing versions are not") {
    auto dir = temp_dir("fields");
    auto path = dir / "records.jsonl.gz";
    {
        json j = to_json(sample_record(9));
        j["a_future_field"] = {{"x", 1}};
        GzWriter w(path);
        w.write_line(j.dump());
        w.close();
    }
    auto back = read_records(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].block_number == 9);

    {
        GzWriter w(path);
        w.write_line(R"({"block_number":1})");
        w.close();
    }
    CHECK_THROWS_AS(read_records(path), SchemaVersionError);

    {
        json j = to_json(sample_record(9));
        j["schema_version"] = 99;
        GzWriter w(path);
        w.write_line(j.dump());
        w.close();
    }
    CHECK_THROWS_AS(read_records(path), SchemaVersionError);
}

TEST_CASE("raw traces archive byte-exactly") {
    auto dir = temp_dir("raw");
    std::string body = R"({"jsonrpc":"2.0","id":1,"result":[]})";
    archive_raw_trace(dir, 20700000, TracerKind::Call, body);
    CHECK(load_raw_trace(dir, 20700000, TracerKind::Call) == body);
    CHECK(has_raw_trace(dir, 20700000, TracerKind::Call));
    CHECK_FALSE(has_raw_trace(dir, 20700000, TracerKind::Prestate));
    CHECK_THROWS_AS(load_raw_trace(dir, 20700000, TracerKind::Prestate), IoError);
    CHECK(trace_path(dir, 20700000, TracerKind::PrestateDiff).filename() ==
          "20700000.prestate_diff.gz");
}

TEST_CASE("archived blocks are listed in ascending order") {
    auto dir = temp_dir("list");
    archive_raw_trace(dir, 5, TracerKind::Call, "{}");
    archive_raw_trace(dir, 2, TracerKind::Call, "{}");
    archive_raw_trace(dir, 2, TracerKind::Prestate, "{}");
    CHECK(list_archived_blocks(dir) == std::vector<uint64_t>{2, 5});
    CHECK(list_archived_blocks(dir / "nope").empty());
}

TEST_CASE("gz line reader handles long lines and empty files") {
    auto dir = temp_dir("gzio");
    auto path = dir / "long.gz";
    std::string long_line(100000, 'x');
    {
        GzWriter w(path);
        w.write_line(long_line);
        w.write_line("short");
        w.close();
    }
    GzReader r(path);
    auto l1 = r.read_line();
    REQUIRE(l1.has_value());
    CHECK(l1->size() == long_line.size());
    CHECK(*r.read_line() == "short");
    CHECK_FALSE(r.read_line().has_value());

    auto empty_path = dir / "empty.gz";
    gzip_write_all(empty_path, "");
    GzReader empty(empty_path);
    CHECK_FALSE(empty.read_line().has_value());
}
