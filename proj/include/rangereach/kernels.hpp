#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rangereach/graph.hpp"
#include "rangereach/oracle.hpp"
#include "rangereach/query.hpp"
#include "rangereach/reach_index.hpp"

namespace rangereach {

// Batch kernels. Each *_parallel function splits the batch across OpenMP
// threads and must return exactly what its serial counterpart returns; the
// serial versions are the reference the tests compare against.
// threads <= 0 means the OpenMP default.

/// One answer (0/1) per query, in batch order.
std::vector<std::uint8_t> answer_batch_serial(const ReachIndex& idx, std::span<const Query> batch);
std::vector<std::uint8_t> answer_batch_parallel(const ReachIndex& idx, std::span<const Query> batch,
                                                int threads = 0);

/// Traversal oracle over a batch.
std::vector<std::uint8_t> oracle_batch_serial(const GeosocialGraph& g, std::span<const Query> batch);
std::vector<std::uint8_t> oracle_batch_parallel(const GeosocialGraph& g, std::span<const Query> batch,
                                                int threads = 0);

/// full_matrix() with rows computed in parallel.
ReachabilityMatrix full_matrix_parallel(const GeosocialGraph& g, int threads = 0);

/// Number of threads OpenMP would use for `threads`.
int effective_threads(int threads);

}  // namespace rangereach
