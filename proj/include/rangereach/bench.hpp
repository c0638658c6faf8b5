#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "rangereach/reach_index.hpp"
#include "rangereach/workload.hpp"

namespace rangereach {

/// Median of a sample (mean of the two middle values for even sizes). 0 for an empty sample.
double median(std::vector<double> values);

struct BenchRow {
    std::string variant;
    std::string index_path;
    std::string workload_kind;
    std::string workload_value;
    std::size_t queries = 0;
    std::size_t repeats = 0;
    int threads = 1;
    std::size_t true_answers = 0;
    // nondeterministic timing columns
    double median_total_ns = 0.0;
    double mean_query_ns = 0.0;

    [[nodiscard]] double true_fraction() const noexcept {
        return queries == 0 ? 0.0 : static_cast<double>(true_answers) / static_cast<double>(queries);
    }
};

/// Runs the workload `repeats` times and reports the median total time.
/// With threads > 1 the batch goes through the OpenMP kernel. When
/// `latencies` is set, one more single-threaded pass records per-query
/// nanoseconds. Throws InputError for an empty workload or repeats == 0.
BenchRow run_bench(const ReachIndex& idx, const QueryWorkload& workload, std::size_t repeats,
                   int threads = 1, std::vector<double>* latencies = nullptr);

void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRow& row);

/// CSV for index_stats(); the trailing build_seconds column is a timing.
void write_stats_header(std::ostream& out);
void write_stats_row(std::ostream& out, const IndexStats& s);

}  // namespace rangereach
