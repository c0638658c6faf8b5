#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangereach/graph.hpp"
#include "rangereach/rank_bitvector.hpp"
#include "rangereach/rtree.hpp"
#include "rangereach/scc.hpp"

namespace rangereach {

enum class Variant : std::uint8_t {
    Standard = 0,    // full condensation, one tree per component, per-vertex tree table
    Compressed = 1,  // spatial sinks excluded, empty components dropped, parent/child sharing
    Pointer = 2,     // Compressed with per-component references behind a rank bit vector
};

std::string_view to_string(Variant v) noexcept;
/// Accepts "standard", "comp"/"compressed" and "pointer".
Variant parse_variant(std::string_view name);

using TreeRef = std::uint32_t;
inline constexpr TreeRef kNoTree = std::numeric_limits<TreeRef>::max();

struct IndexStats {
    Variant variant = Variant::Standard;
    std::size_t vertex_count = 0;
    std::size_t spatial_count = 0;
    std::size_t component_count = 0;  // d
    std::size_t dag_edge_count = 0;   // e
    std::size_t distinct_trees = 0;
    std::size_t pooled_points = 0;
    std::size_t shared_components = 0;  // components reusing a child's tree
    std::size_t components_without_own_spatial = 0;
    std::size_t components_without_reachable_spatial = 0;
    std::size_t rtree_bytes = 0;
    std::size_t pointer_bytes = 0;  // reference tables (+ bit vector for Pointer)
    std::size_t condensation_bytes = 0;
    std::uint64_t union_work = 0;
    double build_seconds = 0.0;

    [[nodiscard]] std::size_t index_bytes() const noexcept { return rtree_bytes + pointer_bytes; }
};

/// Geosocial reachability index: every component of the condensation maps
/// to an R-tree over the spatial vertices it can reach, so a query is one
/// component lookup plus one R-tree existence probe.
///
/// Immutable once built; concurrent queries need no synchronisation.
class ReachIndex {
public:
    ReachIndex() = default;

    /// Throws InputError for fanout < 2.
    static ReachIndex build(const GeosocialGraph& g, Variant variant,
                            std::size_t fanout = kDefaultFanout);

    /// RangeReach(q, r). Throws std::out_of_range for an invalid vertex.
    [[nodiscard]] bool query(VertexId q, const Rect2D& r) const;
    [[nodiscard]] bool query_unchecked(VertexId q, const Rect2D& r) const noexcept;

    [[nodiscard]] Variant variant() const noexcept { return variant_; }
    [[nodiscard]] std::size_t fanout() const noexcept { return fanout_; }
    [[nodiscard]] std::size_t vertex_count() const noexcept { return coords_.size(); }
    [[nodiscard]] const GraphFingerprint& fingerprint() const noexcept { return fingerprint_; }
    [[nodiscard]] const Condensation& condensation() const noexcept { return cond_; }
    [[nodiscard]] std::span<const RTree2D> pool() const noexcept { return pool_; }

    /// Tree answering queries from `v`; kNoTree for spatial sinks (Compressed,
    /// Pointer) and for components that reach no spatial vertex.
    [[nodiscard]] TreeRef tree_of_vertex(VertexId v) const;
    [[nodiscard]] TreeRef tree_of_component(ComponentId c) const;
    /// Child whose tree component `c` reuses, if any.
    [[nodiscard]] std::optional<ComponentId> shared_with(ComponentId c) const;
    /// Sorted spatial vertices reachable from component `c`.
    [[nodiscard]] std::vector<VertexId> reachable_set(ComponentId c) const;
    /// Pointer variant only: bit v is 1 iff v belongs to a social component.
    [[nodiscard]] const RankBitVector& social_bits() const noexcept { return social_bits_; }

    /// Set-union work performed during build: own seeds plus every child
    /// element scanned while merging.
    [[nodiscard]] std::uint64_t union_work() const noexcept { return union_work_; }
    [[nodiscard]] double build_seconds() const noexcept { return build_seconds_; }

    void serialize(std::ostream& out) const;
    static ReachIndex deserialize(std::istream& in);
    void save(const std::filesystem::path& path) const;
    /// When `graph` is given, throws FingerprintMismatch unless the index was built from it.
    static ReachIndex load(const std::filesystem::path& path, const GeosocialGraph* graph = nullptr);

private:
    void derive_lookup_tables();

    Variant variant_ = Variant::Standard;
    std::size_t fanout_ = kDefaultFanout;
    GraphFingerprint fingerprint_;
    Condensation cond_;
    std::vector<RTree2D> pool_;
    std::vector<TreeRef> comp_tree_;          // per component
    std::vector<ComponentId> shared_from_;    // per component; kNoComponent = own tree
    std::vector<TreeRef> vertex_tree_;        // Standard / Compressed
    RankBitVector social_bits_;               // Pointer
    std::vector<ComponentId> rank_comp_;      // Pointer: component of the i-th social vertex
    std::vector<std::optional<Point2D>> coords_;
    std::uint64_t union_work_ = 0;
    double build_seconds_ = 0.0;
};

IndexStats index_stats(const ReachIndex& idx);

}  // namespace rangereach
