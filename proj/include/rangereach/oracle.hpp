#pragma once

#include <cstdint>
#include <vector>

#include "rangereach/geometry.hpp"
#include "rangereach/graph.hpp"

namespace rangereach {

/// Ground truth by graph traversal: true iff some vertex reachable from `q`
/// (including `q` itself) has a coordinate inside `r`.
bool range_reach_bfs(const GeosocialGraph& g, VertexId q, const Rect2D& r);

/// All vertices reachable from `q`, including `q`, in increasing id order.
std::vector<VertexId> reachable_from(const GeosocialGraph& g, VertexId q);

/// Dense reflexive-transitive reachability relation, one bit per pair.
class ReachabilityMatrix {
public:
    ReachabilityMatrix() = default;
    explicit ReachabilityMatrix(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool reaches(VertexId u, VertexId v) const noexcept {
        return (rows_[u * words_ + (v >> 6)] >> (v & 63)) & 1U;
    }
    void set(VertexId u, VertexId v) noexcept {
        rows_[u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
    }

    friend bool operator==(const ReachabilityMatrix&, const ReachabilityMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> rows_;
};

/// Largest graph full_matrix() accepts.
inline constexpr std::size_t kMaxMatrixVertices = 8192;

/// n independent traversals. Throws InputError above kMaxMatrixVertices.
ReachabilityMatrix full_matrix(const GeosocialGraph& g);

}  // namespace rangereach
