#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "rangereach/geometry.hpp"

namespace rangereach {

using VertexId = std::uint32_t;

inline constexpr VertexId kInvalidVertex = std::numeric_limits<VertexId>::max();

/// Identifies the graph an index or workload was produced from.
struct GraphFingerprint {
    std::uint64_t vertex_count = 0;
    std::uint64_t edge_count = 0;
    std::uint64_t spatial_count = 0;
    std::uint64_t edge_hash = 0;

    friend bool operator==(const GraphFingerprint&, const GraphFingerprint&) = default;
};

/// Directed graph whose vertices optionally carry a 2D location.
///
/// Storage is CSR. The constructor normalises the edge lists: out-of-range
/// endpoints are rejected, self-loops and repeated edges are dropped (first
/// occurrence order is kept). Immutable afterwards.
class GeosocialGraph {
public:
    GeosocialGraph() = default;
    GeosocialGraph(const std::vector<std::vector<VertexId>>& adjacency,
                   std::vector<std::optional<Point2D>> coords);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return coords_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return targets_.size(); }
    [[nodiscard]] std::size_t spatial_count() const noexcept { return spatial_ids_.size(); }

    [[nodiscard]] std::span<const VertexId> out_neighbors(VertexId v) const;
    [[nodiscard]] std::size_t out_degree(VertexId v) const;

    [[nodiscard]] bool is_spatial(VertexId v) const { return coord(v).has_value(); }
    [[nodiscard]] const std::optional<Point2D>& coord(VertexId v) const;
    [[nodiscard]] const std::vector<std::optional<Point2D>>& coords() const noexcept {
        return coords_;
    }
    /// Spatial vertex ids in increasing order.
    [[nodiscard]] std::span<const VertexId> spatial_ids() const noexcept { return spatial_ids_; }

    /// Bounding box of all spatial vertices; empty_bounds() when there are none.
    [[nodiscard]] Rect2D spatial_bounds() const noexcept { return bounds_; }

    /// Original (file) id of each dense vertex id. Identity for generated graphs.
    [[nodiscard]] std::span<const std::uint64_t> original_ids() const noexcept {
        return original_ids_;
    }
    void set_original_ids(std::vector<std::uint64_t> ids);
    /// Dense id for a file id, if present.
    [[nodiscard]] std::optional<VertexId> dense_id(std::uint64_t original) const;

    [[nodiscard]] std::size_t dropped_self_loops() const noexcept { return dropped_self_loops_; }
    [[nodiscard]] std::size_t dropped_duplicate_edges() const noexcept {
        return dropped_duplicate_edges_;
    }

    [[nodiscard]] GraphFingerprint fingerprint() const noexcept;

    friend bool operator==(const GeosocialGraph& a, const GeosocialGraph& b) {
        return a.offsets_ == b.offsets_ && a.targets_ == b.targets_ && a.coords_ == b.coords_;
    }

private:
    void check_vertex(VertexId v) const;

    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> targets_;
    std::vector<std::optional<Point2D>> coords_;
    std::vector<VertexId> spatial_ids_;
    std::vector<std::uint64_t> original_ids_;
    Rect2D bounds_ = Rect2D::empty_bounds();
    std::size_t dropped_self_loops_ = 0;
    std::size_t dropped_duplicate_edges_ = 0;
};

/// Counters produced while reading graph files.
struct LoadReport {
    std::size_t edge_lines = 0;
    std::size_t coord_lines = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicate_edges = 0;
    std::size_t repeated_coords = 0;  // identical re-assignments, ignored
};

/// Reads an edge file (`src dst` per line) and a coordinate file (`id x y`
/// per line). `#` lines are comments. A line holding a single id declares a
/// vertex with no edges. File ids are densified to 0..n-1 in
/// increasing order of the original id.
GeosocialGraph load_graph(const std::filesystem::path& edges_path,
                          const std::filesystem::path& coords_path, LoadReport* report = nullptr);

/// Writes the two files read by load_graph, using original ids.
void write_graph(const GeosocialGraph& g, const std::filesystem::path& edges_path,
                 const std::filesystem::path& coords_path);

/// Synthetic location-based social network. Users are ids [0, n_users) and
/// venues [n_users, n_users + n_venues). Venues are sinks located uniformly in
/// the unit square. Edge counts are round(n_users * density) for user->user and
/// user->venue edges, sampled without duplicates.
GeosocialGraph generate_graph(std::size_t n_users, std::size_t n_venues, double social_density,
                              double checkin_density, std::uint64_t seed);

/// Uniform random digraph with `edge_count` distinct edges where a random
/// `spatial_fraction` of the vertices carry coordinates. Spatial vertices may
/// have outgoing edges. With `grid > 0`, coordinates are snapped to a
/// grid x grid lattice in the unit square so duplicates and boundary hits occur.
GeosocialGraph generate_general_graph(std::size_t vertex_count, std::size_t edge_count,
                                      double spatial_fraction, std::uint64_t seed,
                                      unsigned grid = 0);

/// Throws std::out_of_range for an invalid id.
std::size_t out_degree(const GeosocialGraph& g, VertexId v);

}  // namespace rangereach
