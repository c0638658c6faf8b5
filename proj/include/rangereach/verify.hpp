#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rangereach/graph.hpp"
#include "rangereach/query.hpp"
#include "rangereach/reach_index.hpp"
#include "rangereach/scc.hpp"

namespace rangereach {

// Structural checks shared by the verify harness and the test suites. Each
// returns a description of the first violation found, or nullopt.

/// Topological order, DAG hygiene, mutual-reachability partition,
/// member_spatial contents and component size totals. Uses an O(n^2)
/// reachability matrix, so only for small graphs.
std::optional<std::string> check_condensation(const GeosocialGraph& g, const Condensation& c);

/// Tree references, R-tree invariants, reachable sets against traversal,
/// sharing rules, DAG monotonicity and the space / union-work bounds.
std::optional<std::string> check_index(const GeosocialGraph& g, const ReachIndex& idx);

/// Pointer-variant references resolve to the same pool entries as the
/// Compressed variant's per-vertex table.
std::optional<std::string> check_pointer_resolution(const ReachIndex& compressed,
                                                    const ReachIndex& pointer);

/// Space and work bounds: pooled points <= d*p and union work <= d*p*(d + log2 p).
std::optional<std::string> check_size_bounds(const ReachIndex& idx);

/// Mixed query rectangles over the graph: random boxes, degenerate boxes on
/// spatial vertices, tight boxes around single points and far-away boxes.
std::vector<Query> random_queries(const GeosocialGraph& g, std::size_t count, std::mt19937_64& rng);

/// Every vertex crossed with `per_vertex` random rectangles.
std::vector<Query> exhaustive_queries(const GeosocialGraph& g, std::size_t per_vertex,
                                      std::mt19937_64& rng);

struct VerifyOptions {
    std::size_t trials = 200;
    std::size_t min_vertices = 1;
    std::size_t max_vertices = 300;
    std::size_t queries_per_trial = 50;
    std::uint64_t seed = 1;
    /// Test-only: flip the Standard variant's first answer in the first trial.
    bool inject_fault = false;
    /// Prefix for reproduction files written on failure.
    std::optional<std::filesystem::path> repro_prefix;
};

struct VerifyReport {
    bool passed = true;
    std::size_t trials_run = 0;
    std::size_t lbsn_trials = 0;
    std::size_t general_trials = 0;
    std::size_t queries_checked = 0;
    std::string failure;
    /// Edge, coordinate and query files of the minimised failing case.
    std::vector<std::filesystem::path> repro_files;
};

/// Builds all three variants on random graphs and compares every answer
/// with the traversal oracle. Stops at the first divergence or invariant
/// violation, shrinks the failing graph by greedy edge removal and writes
/// it out when a repro prefix is set.
VerifyReport run_verify(const VerifyOptions& options);

}  // namespace rangereach
