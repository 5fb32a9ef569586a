// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ethcg/errors.hpp"
#include "ethcg/store.hpp"

namespace ethcg {

// Shortest round-trip decimal rendering; keeps CSV/SVG output byte-stable.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Histogram of transactions-per-block with fixed-width buckets
// [k*w, (k+1)*w); zero buckets inside the observed range are emitted.
inline std::vector<std::pair<uint64_t, uint64_t>> block_size_histogram(
    const std::vector<BlockMetricsRecord>& records, uint64_t bucket_width = 8) {
    if (bucket_width < 1) throw InvalidArgumentError("bucket width must be at least 1");
    if (records.empty()) return {};
    std::map<uint64_t, uint64_t> buckets;
    uint64_t lowest = UINT64_MAX, highest = 0;
    for (const BlockMetricsRecord& r : records) {
        uint64_t start = (r.tx_count / bucket_width) * bucket_width;
        ++buckets[start];
        lowest = std::min(lowest, start);
        highest = std::max(highest, start);
    }
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (uint64_t start = lowest; start <= highest; start += bucket_width) {
        auto it = buckets.find(start);
        out.emplace_back(start, it == buckets.end() ? 0 : it->second);
    }
    return out;
}

// Named per-record metric accessors for series plotting; nullopt skips the
// record (absent graph slot or undefined value).
using MetricAccessor = std::function<std::optional<double>(const BlockMetricsRecord&)>;

inline const std::map<std::string, MetricAccessor>& metric_registry() {
    static const std::map<std::string, MetricAccessor> registry = [] {
        std::map<std::string, MetricAccessor> reg;
        reg["tx_count"] = [](const BlockMetricsRecord& r) {
            return std::optional<double>(static_cast<double>(r.tx_count));
        };
        reg["value_transfer_ratio"] = [](const BlockMetricsRecord& r) {
            return std::optional<double>(r.value_transfer_ratio);
        };
        auto tree = [](double TreeMetricMeans::* field) {
            return [field](const BlockMetricsRecord& r) -> std::optional<double> {
                if (!r.call_tree_means) return std::nullopt;
                return (*r.call_tree_means).*field;
            };
        };
        reg["tree_node_count"] = tree(&TreeMetricMeans::node_count);
        reg["tree_height"] = tree(&TreeMetricMeans::height);
        reg["tree_mean_degree"] = tree(&TreeMetricMeans::mean_degree);
        reg["tree_leaf_count"] = tree(&TreeMetricMeans::leaf_count);

        struct Field {
            const char* name;
            std::function<std::optional<double>(const GraphMetricsBlock&)> get;
        };
        const std::vector<Field> fields = {
            {"density", [](const GraphMetricsBlock& b) { return std::optional<double>(b.density); }},
            {"diameter",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.diameter); }},
            {"mean_degree",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.mean_degree); }},
            {"max_degree",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.max_degree); }},
            {"assortativity", [](const GraphMetricsBlock& b) { return b.assortativity; }},
            {"largest_cc",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.largest_cc); }},
            {"component_count",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.component_count); }},
            {"greedy_colors",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.greedy_colors); }},
            {"clique_number",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.clique_number); }},
            {"longest_path_edges",
             [](const GraphMetricsBlock& b) { return std::optional<double>(b.longest_path_edges); }},
            {"ratio_lower", [](const GraphMetricsBlock& b) { return b.ratio_lower; }},
            {"ratio_upper", [](const GraphMetricsBlock& b) { return b.ratio_upper; }},
        };
        for (const char* slot : {"prestate_rw", "prestate_all", "calltracer_rw", "calltracer_all"}) {
            for (const Field& field : fields) {
                std::string slot_name = slot;
                auto get = field.get;
                reg[slot_name + "_" + field.name] =
                    [slot_name, get](const BlockMetricsRecord& r) -> std::optional<double> {
                    auto it = r.graphs.find(slot_name);
                    if (it == r.graphs.end()) return std::nullopt;
                    return get(it->second);
                };
            }
        }
        return reg;
    }();
    return registry;
}

inline MetricAccessor metric_accessor(const std::string& name) {
    const auto& registry = metric_registry();
    auto it = registry.find(name);
    if (it == registry.end()) {
        std::string valid;
        for (const auto& [key, fn] : registry) {
            if (!valid.empty()) valid += ", ";
            valid += key;
        }
        throw UnknownMetricError("unknown metric '" + name + "'; valid names: " + valid);
    }
    return it->second;
}

// Nearest-rank percentile over ascending-sorted values, p in [0, 100].
inline double percentile_nearest_rank(const std::vector<double>& sorted_asc, double p) {
    if (sorted_asc.empty()) throw InvalidArgumentError("percentile of empty data");
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(p / 100.0 * static_cast<double>(sorted_asc.size())));
    if (rank < 1) rank = 1;
    if (rank > sorted_asc.size()) rank = sorted_asc.size();
    return sorted_asc[rank - 1];
}

struct QuantileBin {
    double x = 0.0;
    double median = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    uint64_t count = 0;
};

struct QuantileGroup {
    uint64_t label = 0;  // minimum tx count in the group
    std::size_t record_count = 0;
    std::vector<QuantileBin> bins;
};

inline constexpr std::size_t kDensityBins = 40;

// Groups blocks into tx-count quantiles (labelled by the minimum tx count of
// each group), bins each group along the x metric, and reports the median
// with the top/bottom `band` percent per bin.
inline std::vector<QuantileGroup> quantile_series(const std::vector<BlockMetricsRecord>& records,
                                                  const std::string& metric_name,
                                                  std::size_t group_count, double band = 5.0,
                                                  const std::string& x_metric = "prestate_rw_density") {
    if (group_count < 1) throw InvalidArgumentError("group_count must be at least 1");
    MetricAccessor metric = metric_accessor(metric_name);
    MetricAccessor x_axis = metric_accessor(x_metric);

    struct Point {
        uint64_t tx_count;
        uint64_t block;
        double x;
        double y;
    };
    std::vector<Point> points;
    for (const BlockMetricsRecord& r : records) {
        auto y = metric(r);
        auto x = x_axis(r);
        if (!y || !x) continue;
        points.push_back({r.tx_count, r.block_number, *x, *y});
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return a.tx_count != b.tx_count ? a.tx_count < b.tx_count : a.block < b.block;
    });
    if (points.empty()) return {};

    group_count = std::min(group_count, points.size());
    std::vector<QuantileGroup> groups;
    std::size_t base = points.size() / group_count;
    std::size_t extra = points.size() % group_count;
    std::size_t offset = 0;
    for (std::size_t gi = 0; gi < group_count; ++gi) {
        std::size_t size = base + (gi < extra ? 1 : 0);
        std::span<const Point> slice(points.data() + offset, size);
        offset += size;
        if (slice.empty()) continue;

        QuantileGroup group;
        group.label = slice.front().tx_count;
        group.record_count = slice.size();

        double min_x = slice.front().x, max_x = slice.front().x;
        for (const Point& p : slice) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
        }
        double width = (max_x - min_x) / static_cast<double>(kDensityBins);
        std::map<std::size_t, std::vector<double>> binned;
        for (const Point& p : slice) {
            std::size_t bin = 0;
            if (width > 0.0) {
                bin = std::min(kDensityBins - 1,
                               static_cast<std::size_t>((p.x - min_x) / width));
            }
            binned[bin].push_back(p.y);
        }
        for (auto& [bin, values] : binned) {
            std::sort(values.begin(), values.end());
            QuantileBin qb;
            qb.x = width > 0.0 ? min_x + (static_cast<double>(bin) + 0.5) * width : min_x;
            qb.median = percentile_nearest_rank(values, 50.0);
            qb.lo = percentile_nearest_rank(values, band);
            qb.hi = percentile_nearest_rank(values, 100.0 - band);
            qb.count = values.size();
            group.bins.push_back(qb);
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

struct CauseBreakdown {
    std::map<Cause, uint64_t> counts;
    std::map<Cause, double> percent;
    bool empty = false;
};

// Percentage of write-write conflicts per cause; Code is reported even at 0.
inline CauseBreakdown ww_cause_breakdown(const std::vector<BlockMetricsRecord>& records) {
    CauseBreakdown breakdown;
    for (Cause c : kAllCauses) breakdown.counts[c] = 0;
    for (const BlockMetricsRecord& r : records) {
        for (const auto& [cause, count] : r.ww_cause_counts) breakdown.counts[cause] += count;
    }
    uint64_t total = 0;
    for (const auto& [cause, count] : breakdown.counts) total += count;
    breakdown.empty = total == 0;
    for (Cause c : kAllCauses) {
        breakdown.percent[c] = breakdown.empty
                                   ? 0.0
                                   : 100.0 * static_cast<double>(breakdown.counts[c]) /
                                         static_cast<double>(total);
    }
    return breakdown;
}

struct ConflictSource {
    Address address;
    uint64_t total = 0;
    CauseCounts causes;
};

struct TopSources {
    std::vector<ConflictSource> ranked;
    double share_of_total = 0.0;  // top-k totals over the grand total
};

// Descending by total conflicts, ties broken by address bytes.
inline TopSources top_conflict_sources(const std::map<Address, CauseCounts>& attributions,
                                       std::size_t k) {
    if (k < 1) throw InvalidArgumentError("k must be at least 1");
    std::vector<ConflictSource> all;
    uint64_t grand_total = 0;
    for (const auto& [addr, causes] : attributions) {
        ConflictSource src{addr, causes.total(), causes};
        grand_total += src.total;
        all.push_back(src);
    }
    std::sort(all.begin(), all.end(), [](const ConflictSource& a, const ConflictSource& b) {
        return a.total != b.total ? a.total > b.total : a.address < b.address;
    });
    TopSources top;
    uint64_t top_total = 0;
    for (std::size_t i = 0; i < all.size() && i < k; ++i) {
        top_total += all[i].total;
        top.ranked.push_back(all[i]);
    }
    top.share_of_total = grand_total == 0
                             ? 0.0
                             : static_cast<double>(top_total) / static_cast<double>(grand_total);
    return top;
}

// Hill tail-index estimator over the top-k descending order statistics:
//   H = (1/k) * sum_{i=1..k} ln(x_(i) / x_(k+1)).
inline double hill_estimator(std::vector<double> values, std::size_t k) {
    if (k < 1) throw InvalidArgumentError("k must be at least 1");
    std::erase_if(values, [](double v) { return !(v > 0.0); });
    if (values.size() <= k) {
        throw InsufficientDataError("hill estimator needs more than k=" + std::to_string(k) +
                                    " strictly positive values, got " +
                                    std::to_string(values.size()));
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    double reference = values[k];  // x_(k+1)
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(values[i] / reference);
    return sum / static_cast<double>(k);
}

// --- figure-equivalent CSV/SVG emission -------------------------------------

struct ReportOptions {
    uint64_t bucket_width = 8;
    std::size_t groups = 4;
    double band = 5.0;
    std::size_t top_k = 10;
    std::size_t hill_k = 100;
};

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

// Minimal deterministic SVG line chart: per-group median polyline over a
// band polygon.
inline std::string render_series_svg(const std::vector<QuantileGroup>& groups,
                                     const std::string& title) {
    constexpr double kW = 800.0, kH = 500.0, kPad = 60.0;
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool first = true;
    for (const auto& g : groups) {
        for (const auto& b : g.bins) {
            if (first) {
                min_x = max_x = b.x;
                min_y = b.lo;
                max_y = b.hi;
                first = false;
            }
            min_x = std::min(min_x, b.x);
            max_x = std::max(max_x, b.x);
            min_y = std::min(min_y, b.lo);
            max_y = std::max(max_y, b.hi);
        }
    }
    if (max_x == min_x) max_x = min_x + 1.0;
    if (max_y == min_y) max_y = min_y + 1.0;
    auto sx = [&](double x) { return kPad + (x - min_x) / (max_x - min_x) * (kW - 2 * kPad); };
    auto sy = [&](double y) { return kH - kPad - (y - min_y) / (max_y - min_y) * (kH - 2 * kPad); };

    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + fmt_double(kPad) + "\" y1=\"" + fmt_double(kH - kPad) + "\" x2=\"" +
           fmt_double(kW - kPad) + "\" y2=\"" + fmt_double(kH - kPad) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt_double(kPad) + "\" y1=\"" + fmt_double(kPad) + "\" x2=\"" +
           fmt_double(kPad) + "\" y2=\"" + fmt_double(kH - kPad) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_double(kPad) + "\" y=\"" + fmt_double(kH - kPad + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + fmt_double(min_x) + "</text>\n";
    svg += "<text x=\"" + fmt_double(kW - kPad) + "\" y=\"" + fmt_double(kH - kPad + 20) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           fmt_double(max_x) + "</text>\n";
    svg += "<text x=\"" + fmt_double(kPad - 6) + "\" y=\"" + fmt_double(kH - kPad) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           fmt_double(min_y) + "</text>\n";
    svg += "<text x=\"" + fmt_double(kPad - 6) + "\" y=\"" + fmt_double(kPad) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           fmt_double(max_y) + "</text>\n";

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& bins = groups[gi].bins;
        if (bins.empty()) continue;
        const char* color = kColors[gi % 8];
        std::string band_points;
        for (const auto& b : bins) {
            band_points += fmt_double(sx(b.x)) + "," + fmt_double(sy(b.hi)) + " ";
        }
        for (auto it = bins.rbegin(); it != bins.rend(); ++it) {
            band_points += fmt_double(sx(it->x)) + "," + fmt_double(sy(it->lo)) + " ";
        }
        svg += "<polygon points=\"" + band_points + "\" fill=\"" + color +
               "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        std::string line_points;
        for (const auto& b : bins) {
            line_points += fmt_double(sx(b.x)) + "," + fmt_double(sy(b.median)) + " ";
        }
        svg += "<polyline points=\"" + line_points + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt_double(kW - kPad + 4) + "\" y=\"" +
               fmt_double(kPad + 16.0 * static_cast<double>(gi)) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">n&#8805;" +
               std::to_string(groups[gi].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

inline std::string render_histogram_svg(const std::vector<std::pair<uint64_t, uint64_t>>& buckets,
                                        const std::string& title) {
    constexpr double kW = 800.0, kH = 500.0, kPad = 60.0;
    uint64_t max_count = 1;
    for (const auto& [start, count] : buckets) max_count = std::max(max_count, count);
    double bar_w = (kW - 2 * kPad) / static_cast<double>(std::max<std::size_t>(1, buckets.size()));
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" + title + "</text>\n";
    svg += "<line x1=\"" + fmt_double(kPad) + "\" y1=\"" + fmt_double(kH - kPad) + "\" x2=\"" +
           fmt_double(kW - kPad) + "\" y2=\"" + fmt_double(kH - kPad) +
           "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        double h = (kH - 2 * kPad) * static_cast<double>(buckets[i].second) /
                   static_cast<double>(max_count);
        svg += "<rect x=\"" + fmt_double(kPad + bar_w * static_cast<double>(i)) + "\" y=\"" +
               fmt_double(kH - kPad - h) + "\" width=\"" + fmt_double(bar_w * 0.9) +
               "\" height=\"" + fmt_double(h) + "\" fill=\"#1f77b4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace detail

// Writes the figure-equivalent CSV tables and SVG charts for a record set.
// Deterministic: rerunning on the same input produces byte-identical files.
// Returns the relative names of the files written.
inline std::vector<std::string> emit_report(const std::vector<BlockMetricsRecord>& records,
                                            const std::filesystem::path& out_dir,
                                            const ReportOptions& opts = {}) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        detail::write_text_file(out_dir / name, content);
        written.push_back(name);
    };

    if (records.empty()) {
        std::cerr << "level=warn msg=\"emit_report: no records; writing empty tables\"\n";
    }

    // Block-size histogram.
    {
        std::string csv = "bucket_start,count\n";
        auto buckets = block_size_histogram(records, opts.bucket_width);
        for (const auto& [start, count] : buckets) {
            csv += std::to_string(start) + "," + std::to_string(count) + "\n";
        }
        emit("block_size_histogram.csv", csv);
        if (!buckets.empty()) {
            emit("block_size_histogram.svg",
                 detail::render_histogram_svg(buckets, "block size histogram"));
        }
    }

    // Per-block scatter of value-transfer ratio against density.
    {
        std::string csv = "block_number,prestate_rw_density,value_transfer_ratio\n";
        MetricAccessor density = metric_accessor("prestate_rw_density");
        for (const BlockMetricsRecord& r : records) {
            auto d = density(r);
            if (!d) continue;
            csv += std::to_string(r.block_number) + "," + fmt_double(*d) + "," +
                   fmt_double(r.value_transfer_ratio) + "\n";
        }
        emit("value_transfer_ratio.csv", csv);
    }

    // WW cause percentages.
    {
        CauseBreakdown breakdown = ww_cause_breakdown(records);
        std::string csv = "cause,count,percent\n";
        for (Cause c : kAllCauses) {
            csv += to_string(c) + "," + std::to_string(breakdown.counts[c]) + "," +
                   fmt_double(breakdown.percent[c]) + "\n";
        }
        emit("ww_causes.csv", csv);
    }

    // Top conflict-source addresses plus tail statistics.
    {
        std::map<Address, CauseCounts> attributions;
        for (const BlockMetricsRecord& r : records) {
            for (const auto& [addr, causes] : r.ww_address_causes) {
                CauseCounts& agg = attributions[addr];
                agg.balance += causes.balance;
                agg.nonce += causes.nonce;
                agg.storage += causes.storage;
                agg.code += causes.code;
            }
        }
        TopSources top = top_conflict_sources(attributions, opts.top_k);
        std::string csv = "rank,address,total,balance,storage,nonce,code\n";
        for (std::size_t i = 0; i < top.ranked.size(); ++i) {
            const ConflictSource& src = top.ranked[i];
            csv += std::to_string(i + 1) + "," + src.address.to_hex() + "," +
                   std::to_string(src.total) + "," + std::to_string(src.causes.balance) + "," +
                   std::to_string(src.causes.storage) + "," + std::to_string(src.causes.nonce) +
                   "," + std::to_string(src.causes.code) + "\n";
        }
        emit("ww_top_sources.csv", csv);

        std::vector<double> totals;
        for (const auto& [addr, causes] : attributions) {
            totals.push_back(static_cast<double>(causes.total()));
        }
        std::string stats = "statistic,value\n";
        stats += "unique_addresses," + std::to_string(totals.size()) + "\n";
        stats += "top_k_share," + fmt_double(top.share_of_total) + "\n";
        if (!totals.empty()) {
            std::vector<double> sorted = totals;
            std::sort(sorted.begin(), sorted.end());
            double mean = 0.0;
            for (double v : sorted) mean += v;
            mean /= static_cast<double>(sorted.size());
            stats += "mean," + fmt_double(mean) + "\n";
            stats += "median," + fmt_double(percentile_nearest_rank(sorted, 50.0)) + "\n";
            stats += "p95," + fmt_double(percentile_nearest_rank(sorted, 95.0)) + "\n";
            if (totals.size() > opts.hill_k) {
                stats += "hill_k" + std::to_string(opts.hill_k) + "," +
                         fmt_double(hill_estimator(totals, opts.hill_k)) + "\n";
            }
        }
        emit("ww_source_stats.csv", stats);
    }

    // Quantile-grouped median/band series per graph metric, against density.
    const std::vector<std::string> series_metrics = {
        "prestate_rw_diameter",      "prestate_rw_max_degree",
        "prestate_rw_mean_degree",   "prestate_rw_assortativity",
        "prestate_rw_greedy_colors", "prestate_rw_clique_number",
        "prestate_rw_largest_cc",    "prestate_rw_longest_path_edges",
        "prestate_rw_ratio_lower",   "prestate_rw_ratio_upper",
        "calltracer_rw_diameter",    "calltracer_rw_greedy_colors",
        "tree_node_count",           "tree_height",
        "tree_mean_degree",          "tree_leaf_count",
    };
    for (const std::string& metric : series_metrics) {
        auto groups = quantile_series(records, metric, opts.groups, opts.band);
        std::string csv = "group_label,x,median,p_lo,p_hi,count\n";
        for (const QuantileGroup& g : groups) {
            for (const QuantileBin& b : g.bins) {
                csv += std::to_string(g.label) + "," + fmt_double(b.x) + "," +
                       fmt_double(b.median) + "," + fmt_double(b.lo) + "," + fmt_double(b.hi) +
                       "," + std::to_string(b.count) + "\n";
            }
        }
        emit(metric + ".csv", csv);
        if (!groups.empty()) {
            emit(metric + ".svg", detail::render_series_svg(groups, metric));
        }
    }
    return written;
}

}  // namespace ethcg
