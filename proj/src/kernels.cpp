#include "rangereach/kernels.hpp"

#include <algorithm>
#include <string>

#include <omp.h>

namespace rangereach {

namespace {

int resolve(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

void check_batch(const GeosocialGraph& g, std::span<const Query> batch) {
    for (const Query& q : batch) {
        if (q.vertex >= g.vertex_count()) throw std::out_of_range("query vertex out of range");
    }
}

void check_batch(const ReachIndex& idx, std::span<const Query> batch) {
    for (const Query& q : batch) {
        if (q.vertex >= idx.vertex_count()) throw std::out_of_range("query vertex out of range");
    }
}

}  // namespace

int effective_threads(int threads) { return resolve(threads); }

std::vector<std::uint8_t> answer_batch_serial(const ReachIndex& idx, std::span<const Query> batch) {
    check_batch(idx, batch);
    std::vector<std::uint8_t> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = idx.query_unchecked(batch[i].vertex, batch[i].rect) ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> answer_batch_parallel(const ReachIndex& idx, std::span<const Query> batch,
                                                int threads) {
    check_batch(idx, batch);
    std::vector<std::uint8_t> out(batch.size());
    const auto count = static_cast<std::int64_t>(batch.size());
#pragma omp parallel for schedule(static) num_threads(resolve(threads))
    for (std::int64_t i = 0; i < count; ++i) {
        out[i] = idx.query_unchecked(batch[i].vertex, batch[i].rect) ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> oracle_batch_serial(const GeosocialGraph& g, std::span<const Query> batch) {
    check_batch(g, batch);
    std::vector<std::uint8_t> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = range_reach_bfs(g, batch[i].vertex, batch[i].rect) ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> oracle_batch_parallel(const GeosocialGraph& g, std::span<const Query> batch,
                                                int threads) {
    check_batch(g, batch);
    std::vector<std::uint8_t> out(batch.size());
    const auto count = static_cast<std::int64_t>(batch.size());
    // traversal cost varies a lot between queries
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve(threads))
    for (std::int64_t i = 0; i < count; ++i) {
        out[i] = range_reach_bfs(g, batch[i].vertex, batch[i].rect) ? 1 : 0;
    }
    return out;
}

ReachabilityMatrix full_matrix_parallel(const GeosocialGraph& g, int threads) {
    const std::size_t n = g.vertex_count();
    if (n > kMaxMatrixVertices) {
        throw InputError("graph has " + std::to_string(n) +
                         " vertices; the reachability matrix is limited to " +
                         std::to_string(kMaxMatrixVertices));
    }
    ReachabilityMatrix m(n);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel num_threads(resolve(threads))
    {
        std::vector<std::uint8_t> seen(n);
        std::vector<VertexId> frontier;
        // each thread writes whole rows, which occupy disjoint words
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t u = 0; u < rows; ++u) {
            std::fill(seen.begin(), seen.end(), 0);
            frontier.assign(1, static_cast<VertexId>(u));
            seen[u] = 1;
            for (std::size_t head = 0; head < frontier.size(); ++head) {
                const VertexId x = frontier[head];
                m.set(static_cast<VertexId>(u), x);
                for (VertexId w : g.out_neighbors(x)) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        frontier.push_back(w);
                    }
                }
            }
        }
    }
    return m;
}

}  // namespace rangereach
