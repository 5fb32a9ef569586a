// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "ethcg/report.hpp"
#include "generators.hpp"

using namespace ethcg;

namespace {

BlockMetricsRecord record_with(uint64_t block, uint64_t tx_count, double density,
                               double metric_value) {
    BlockMetricsRecord r;
    r.block_number = block;
    r.tx_count = tx_count;
    r.value_transfer_ratio = 0.6;
    GraphMetricsBlock g;
    g.density = density;
    g.diameter = static_cast<uint32_t>(metric_value);
    g.mean_degree = metric_value;
    r.graphs["prestate_rw"] = g;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("ethcg_report_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("histogram buckets include interior zeros") {
    std::vector<BlockMetricsRecord> records;
    for (uint64_t size : {0ull, 7ull, 8ull}) records.push_back(record_with(size, size, 0.1, 1));
    auto h = block_size_histogram(records, 8);
    REQUIRE(h.size() == 2);
    CHECK(h[0] == std::pair<uint64_t, uint64_t>{0, 2});
    CHECK(h[1] == std::pair<uint64_t, uint64_t>{8, 1});
}

TEST_CASE("histogram of an empty record set is empty") {
    CHECK(block_size_histogram({}, 8).empty());
}

TEST_CASE("identical sizes land in one bucket") {
    std::vector<BlockMetricsRecord> records;
    for (int i = 0; i < 5; ++i) records.push_back(record_with(i, 150, 0.1, 1));
    auto h = block_size_histogram(records, 8);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == std::pair<uint64_t, uint64_t>{144, 5});
}

TEST_CASE("histogram counts always sum to the record count") {
    std::mt19937_64 rng(61);
    std::vector<BlockMetricsRecord> records;
    for (int i = 0; i < 333; ++i) records.push_back(record_with(i, rng() % 1400, 0.1, 1));
    uint64_t total = 0;
    for (const auto& [start, count] : block_size_histogram(records)) total += count;
    CHECK(total == records.size());
}

TEST_CASE("quantile groups are labelled by their minimum tx count") {
    std::vector<BlockMetricsRecord> records = {
        record_with(1, 10, 0.1, 1), record_with(2, 20, 0.2, 2),
        record_with(3, 30, 0.3, 3), record_with(4, 40, 0.4, 4)};
    auto groups = quantile_series(records, "prestate_rw_mean_degree", 2);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].label == 10);
    CHECK(groups[1].label == 30);
    CHECK(groups[0].record_count + groups[1].record_count == 4);
}

TEST_CASE("order statistics over five points") {
    std::vector<BlockMetricsRecord> records;
    for (int i = 1; i <= 5; ++i) {
        records.push_back(record_with(i, 10, 0.5, static_cast<double>(i)));
    }
    auto groups = quantile_series(records, "prestate_rw_mean_degree", 1);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].bins.size() == 1);
    CHECK(groups[0].bins[0].median == 3.0);
    CHECK(groups[0].bins[0].lo == 1.0);
    CHECK(groups[0].bins[0].hi == 5.0);
}

TEST_CASE("constant metrics collapse median and band") {
    std::vector<BlockMetricsRecord> records;
    for (int i = 0; i < 7; ++i) records.push_back(record_with(i, 10 + i, 0.2, 4.25));
    auto groups = quantile_series(records, "prestate_rw_mean_degree", 1);
    for (const auto& b : groups[0].bins) {
        CHECK(b.median == 4.25);
        CHECK(b.lo == 4.25);
        CHECK(b.hi == 4.25);
    }
}

TEST_CASE("unknown metric names list the valid ones") {
    try {
        quantile_series({record_with(1, 10, 0.1, 1)}, "bogus_metric", 2);
        FAIL("expected UnknownMetricError");
    } catch (const UnknownMetricError& e) {
        std::string what = e.what();
        CHECK(what.find("bogus_metric") != std::string::npos);
        CHECK(what.find("prestate_rw_density") != std::string::npos);
    }
}

TEST_CASE("quantile group labels are non-decreasing and partition records") {
    std::mt19937_64 rng(62);
    std::vector<BlockMetricsRecord> records;
    for (int i = 0; i < 200; ++i) {
        records.push_back(record_with(i, rng() % 500,
                                      static_cast<double>(rng() % 1000) / 1000.0,
                                      static_cast<double>(rng() % 50)));
    }
    auto groups = quantile_series(records, "prestate_rw_mean_degree", 5);
    std::size_t covered = 0;
    uint64_t last_label = 0;
    for (const auto& g : groups) {
        CHECK(g.label >= last_label);
        last_label = g.label;
        covered += g.record_count;
    }
    CHECK(covered == records.size());
}

TEST_CASE("ww cause percentages match the quoted arithmetic") {
    BlockMetricsRecord r;
    r.ww_cause_counts = {{Cause::Balance, 976}, {Cause::Storage, 17}, {Cause::Nonce, 6},
                         {Cause::Code, 0}};
    auto breakdown = ww_cause_breakdown({r});
    CHECK_FALSE(breakdown.empty);
    // Exact values over the 999-count vector; within 1-decimal rounding of
    // the reported 97.6 / 1.7 / 0.6 split.
    CHECK_THAT(breakdown.percent[Cause::Balance],
               Catch::Matchers::WithinAbs(100.0 * 976 / 999, 1e-12));
    CHECK_THAT(breakdown.percent[Cause::Balance], Catch::Matchers::WithinAbs(97.6, 0.11));
    CHECK_THAT(breakdown.percent[Cause::Storage], Catch::Matchers::WithinAbs(1.7, 0.11));
    CHECK_THAT(breakdown.percent[Cause::Nonce], Catch::Matchers::WithinAbs(0.6, 0.11));
    CHECK(breakdown.percent[Cause::Code] == 0.0);
    CHECK(breakdown.counts.size() == 4);  // code reported even at zero

    double sum = 0.0;
    for (auto [cause, pct] : breakdown.percent) sum += pct;
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(100.0, 1e-9));
}

TEST_CASE("all-zero causes flag an empty breakdown") {
    auto breakdown = ww_cause_breakdown({});
    CHECK(breakdown.empty);
    for (auto [cause, pct] : breakdown.percent) CHECK(pct == 0.0);
}

TEST_CASE("single cause takes 100 percent") {
    BlockMetricsRecord r;
    r.ww_cause_counts = {{Cause::Storage, 12}};
    auto breakdown = ww_cause_breakdown({r});
    CHECK(breakdown.percent[Cause::Storage] == 100.0);
}

TEST_CASE("top conflict sources rank by total with address tie-break") {
    std::map<Address, CauseCounts> attributions;
    attributions[generators::addr(1)] = CauseCounts{70, 0, 0, 0};
    attributions[generators::addr(2)] = CauseCounts{20, 0, 0, 0};
    attributions[generators::addr(3)] = CauseCounts{10, 0, 0, 0};
    TopSources top = top_conflict_sources(attributions, 2);
    REQUIRE(top.ranked.size() == 2);
    CHECK(top.ranked[0].address == generators::addr(1));
    CHECK(top.ranked[0].total == 70);
    CHECK(top.ranked[1].total == 20);
    CHECK(top.share_of_total == 0.9);

    TopSources all = top_conflict_sources(attributions, 10);
    CHECK(all.ranked.size() == 3);
    CHECK(all.share_of_total == 1.0);

    std::map<Address, CauseCounts> ties;
    ties[generators::addr(5)] = CauseCounts{10, 0, 0, 0};
    ties[generators::addr(4)] = CauseCounts{10, 0, 0, 0};
    TopSources tied = top_conflict_sources(ties, 1);
    CHECK(tied.ranked[0].address == generators::addr(4));
}

TEST_CASE("hill estimator on constant data is exactly zero") {
    std::vector<double> constant(500, 3.5);
    CHECK(hill_estimator(constant, 100) == 0.0);
}

TEST_CASE("hill estimator matches the hand-computed example") {
    double h = hill_estimator({8, 4, 2, 1}, 2);
    CHECK_THAT(h, Catch::Matchers::WithinAbs(1.0397207708399179, 1e-12));
}

TEST_CASE("hill estimator recovers the Pareto reciprocal tail exponent") {
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> samples;
    samples.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        double u = uniform(rng);
        samples.push_back(std::pow(1.0 - u, -0.5));  // Pareto alpha=2, xm=1
    }
    double h = hill_estimator(samples, 100);
    CHECK(h > 0.4);
    CHECK(h < 0.6);
}

TEST_CASE("hill estimator rejects insufficient or non-positive data") {
    CHECK_THROWS_AS(hill_estimator({1.0, 2.0}, 2), InsufficientDataError);
    CHECK_THROWS_AS(hill_estimator({-1.0, 0.0, 2.0}, 1), InsufficientDataError);
    CHECK_THROWS_AS(hill_estimator({1.0, 2.0, 3.0}, 0), InvalidArgumentError);
}

TEST_CASE("hill estimator is scale invariant") {
    std::mt19937_64 rng(64);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<double> values;
        std::size_t n = 20 + rng() % 100;
        for (std::size_t i = 0; i < n; ++i) {
            values.push_back(0.5 + static_cast<double>(rng() % 10000));
        }
        std::size_t k = 1 + rng() % (n - 2);
        double h = hill_estimator(values, k);
        std::vector<double> scaled = values;
        double c = 3.25;
        for (double& v : scaled) v *= c;
        CHECK_THAT(hill_estimator(scaled, k), Catch::Matchers::WithinAbs(h, 1e-9));
    }
}

TEST_CASE("emit_report writes deterministic files") {
    std::mt19937_64 rng(65);
    std::vector<BlockMetricsRecord> records;
    for (int i = 0; i < 40; ++i) {
        auto r = record_with(1000 + i, 50 + rng() % 300,
                             static_cast<double>(rng() % 1000) / 2000.0,
                             static_cast<double>(rng() % 10));
        r.ww_cause_counts = {{Cause::Balance, rng() % 100}, {Cause::Storage, rng() % 5},
                             {Cause::Nonce, rng() % 3}, {Cause::Code, 0}};
        r.ww_address_causes[generators::addr(static_cast<uint32_t>(rng() % 6))] =
            CauseCounts{rng() % 50, 0, rng() % 3, 0};
        records.push_back(r);
    }
    auto dir_a = temp_dir("emit_a");
    auto dir_b = temp_dir("emit_b");
    auto files_a = emit_report(records, dir_a);
    auto files_b = emit_report(records, dir_b);
    REQUIRE(files_a == files_b);
    REQUIRE_FALSE(files_a.empty());
    for (const std::string& name : files_a) {
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }

    bool has_csv = false, has_svg = false;
    for (const std::string& name : files_a) {
        if (name.ends_with(".csv")) has_csv = true;
        if (name.ends_with(".svg")) has_svg = true;
    }
    CHECK(has_csv);
    CHECK(has_svg);
}

TEST_CASE("emit_report on empty records succeeds with empty tables") {
    auto dir = temp_dir("emit_empty");
    auto files = emit_report({}, dir);
    CHECK_FALSE(files.empty());
    for (const std::string& name : files) CHECK_FALSE(name.ends_with(".svg"));
    std::string histogram = slurp(dir / "block_size_histogram.csv");
    CHECK(histogram == "bucket_start,count\n");
}
