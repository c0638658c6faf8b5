#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rangereach/graph.hpp"

namespace rangereach {

using ComponentId = std::uint32_t;

/// comp_of value for vertices left out of a SocialOnly decomposition (spatial sinks).
inline constexpr ComponentId kNoComponent = std::numeric_limits<ComponentId>::max();

enum class CondenseMode : std::uint8_t {
    Full,        // every vertex belongs to a component
    SocialOnly,  // spatial sinks are excluded from the decomposition
};

/// Strongly connected components of a graph collapsed into a DAG.
///
/// Component ids are assigned in increasing order of each component's
/// smallest member vertex, so numbering does not depend on traversal order.
///
/// `member_spatial[c]` is the sorted set of spatial vertices a component owns
/// directly. In Full mode that is its spatial members. In SocialOnly mode it
/// is the spatial sinks that are out-neighbours of any member, plus any
/// spatial vertex with out-edges that sits inside the component itself.
struct Condensation {
    CondenseMode mode = CondenseMode::Full;
    std::vector<ComponentId> comp_of;
    std::size_t comp_count = 0;
    std::vector<std::vector<ComponentId>> dag_adjacency;  // sorted, deduplicated
    std::vector<ComponentId> topo_order;
    std::vector<std::vector<VertexId>> member_spatial;

    [[nodiscard]] std::size_t dag_edge_count() const noexcept;
    /// Vertices per component.
    [[nodiscard]] std::vector<std::size_t> component_sizes() const;
    /// In-memory size of comp_of, the DAG and member_spatial tables.
    [[nodiscard]] std::size_t memory_bytes() const noexcept;
};

/// True for vertices the SocialOnly decomposition excludes: spatial vertices
/// without outgoing edges.
bool is_spatial_sink(const GeosocialGraph& g, VertexId v);

Condensation condense(const GeosocialGraph& g, CondenseMode mode);

/// Kahn's algorithm with smallest-id-first tie breaking. Throws Error if the
/// component graph has a cycle.
std::vector<ComponentId> topological_order(const Condensation& c);

/// Components of an arbitrary adjacency list using an iterative lowlink
/// search. `include[v] == 0` removes v from the graph. Returns one label
/// per vertex (kNoComponent for excluded vertices), labels numbered by
/// smallest member, and sets `count`.
std::vector<ComponentId> strongly_connected_components(const GeosocialGraph& g,
                                                       std::span<const std::uint8_t> include,
                                                       std::size_t& count);

}  // namespace rangereach
