#include "rangereach/oracle.hpp"

#include <algorithm>
#include <string>

namespace rangereach {

namespace {

/// Visits vertices reachable from q in BFS order until `visit` returns true.
template <typename Visit>
bool traverse(const GeosocialGraph& g, VertexId q, std::vector<std::uint8_t>& seen,
              std::vector<VertexId>& frontier, Visit&& visit) {
    frontier.clear();
    frontier.push_back(q);
    seen[q] = 1;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const VertexId u = frontier[head];
        if (visit(u)) return true;
        for (VertexId w : g.out_neighbors(u)) {
            if (!seen[w]) {
                seen[w] = 1;
                frontier.push_back(w);
            }
        }
    }
    return false;
}

}  // namespace

bool range_reach_bfs(const GeosocialGraph& g, VertexId q, const Rect2D& r) {
    std::vector<std::uint8_t> seen(g.vertex_count(), 0);
    std::vector<VertexId> frontier;
    return traverse(g, q, seen, frontier, [&](VertexId v) {
        const auto& p = g.coord(v);
        return p && r.contains(*p);
    });
}

std::vector<VertexId> reachable_from(const GeosocialGraph& g, VertexId q) {
    std::vector<std::uint8_t> seen(g.vertex_count(), 0);
    std::vector<VertexId> frontier;
    traverse(g, q, seen, frontier, [](VertexId) { return false; });
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

ReachabilityMatrix::ReachabilityMatrix(std::size_t n)
    : n_(n), words_((n + 63) / 64), rows_(n * ((n + 63) / 64), 0) {}

ReachabilityMatrix full_matrix(const GeosocialGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n > kMaxMatrixVertices) {
        throw InputError("graph has " + std::to_string(n) + " vertices; the reachability matrix is limited to " +
                         std::to_string(kMaxMatrixVertices));
    }
    ReachabilityMatrix m(n);
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<VertexId> frontier;
    for (VertexId u = 0; u < n; ++u) {
        std::fill(seen.begin(), seen.end(), 0);
        traverse(g, u, seen, frontier, [&](VertexId v) {
            m.set(u, v);
            return false;
        });
    }
    return m;
}

}  // namespace rangereach
