#include "rangereach/bench.hpp"

#include <algorithm>
#include <chrono>

#include "rangereach/kernels.hpp"
#include "text_util.hpp"

namespace rangereach {

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

BenchRow run_bench(const ReachIndex& idx, const QueryWorkload& workload, std::size_t repeats,
                   int threads, std::vector<double>* latencies) {
    if (workload.queries.empty()) throw InputError("workload contains no queries");
    if (repeats == 0) throw InputError("repeat count must be positive");
    for (const Query& q : workload.queries) {
        if (q.vertex >= idx.vertex_count()) throw InputError("workload vertex out of range for this index");
    }

    using clock = std::chrono::steady_clock;
    const std::span<const Query> batch(workload.queries);
    std::vector<double> totals;
    std::vector<std::uint8_t> answers;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto start = clock::now();
        answers = threads > 1 ? answer_batch_parallel(idx, batch, threads) : answer_batch_serial(idx, batch);
        const auto stop = clock::now();
        totals.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
    }

    if (latencies) {
        latencies->clear();
        latencies->reserve(batch.size());
        for (const Query& q : batch) {
            const auto start = clock::now();
            volatile bool hit = idx.query_unchecked(q.vertex, q.rect);
            (void)hit;
            latencies->push_back(std::chrono::duration<double, std::nano>(clock::now() - start).count());
        }
    }

    BenchRow row;
    row.variant = std::string(to_string(idx.variant()));
    row.workload_kind = workload.meta_value("kind").value_or("unknown");
    row.workload_value = workload.meta_value("value").value_or("");
    row.queries = batch.size();
    row.repeats = repeats;
    row.threads = std::max(threads, 1);
    row.true_answers = static_cast<std::size_t>(std::count(answers.begin(), answers.end(), 1));
    row.median_total_ns = median(totals);
    row.mean_query_ns = row.median_total_ns / static_cast<double>(row.queries);
    return row;
}

void write_bench_header(std::ostream& out) {
    out << "variant,index,workload_kind,workload_value,queries,repeats,threads,true_answers,"
           "true_fraction,median_total_ns,mean_query_ns\n";
}

void write_bench_row(std::ostream& out, const BenchRow& row) {
    out << row.variant << ',' << row.index_path << ',' << row.workload_kind << ','
        << row.workload_value << ',' << row.queries << ',' << row.repeats << ',' << row.threads
        << ',' << row.true_answers << ',' << detail::format_double(row.true_fraction()) << ','
        << detail::format_double(row.median_total_ns) << ','
        << detail::format_double(row.mean_query_ns) << '\n';
}

void write_stats_header(std::ostream& out) {
    out << "variant,vertices,spatial,components,dag_edges,distinct_trees,pooled_points,"
           "shared_components,components_without_own_spatial,components_without_reachable_spatial,"
           "rtree_bytes,pointer_bytes,index_bytes,condensation_bytes,union_work,build_seconds\n";
}

void write_stats_row(std::ostream& out, const IndexStats& s) {
    out << to_string(s.variant) << ',' << s.vertex_count << ',' << s.spatial_count << ','
        << s.component_count << ',' << s.dag_edge_count << ',' << s.distinct_trees << ','
        << s.pooled_points << ',' << s.shared_components << ','
        << s.components_without_own_spatial << ',' << s.components_without_reachable_spatial
        << ',' << s.rtree_bytes << ',' << s.pointer_bytes << ',' << s.index_bytes() << ','
        << s.condensation_bytes << ',' << s.union_work << ','
        << detail::format_double(s.build_seconds) << '\n';
}

}  // namespace rangereach
