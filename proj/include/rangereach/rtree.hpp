#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangereach/binary_io.hpp"
#include "rangereach/geometry.hpp"
#include "rangereach/graph.hpp"

namespace rangereach {

inline constexpr std::size_t kDefaultFanout = 16;

/// Static 2D R-tree over labelled points, packed with Sort-Tile-Recursive.
///
/// Levels are stored bottom-up: level 0 holds the leaves (children are
/// entries), the last level holds the single root. Every node's children are
/// contiguous in the level below. Each level is split into ceil(k / M)
/// groups of near-equal size, so every non-root node has between ceil(M/2)
/// and M children.
class RTree2D {
public:
    struct Entry {
        Point2D point;
        VertexId id = 0;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    struct Node {
        Rect2D box;
        std::uint32_t first_child = 0;
        std::uint32_t child_count = 0;
        std::uint32_t subtree_size = 0;  // entries below this node
    };

    // memory_footprint() accounting, in bytes
    static constexpr std::size_t kHeaderBytes = 24;  // size, fanout, height
    static constexpr std::size_t kNodeBytes = 4 * sizeof(double) + 3 * sizeof(std::uint32_t);
    static constexpr std::size_t kEntryBytes = 2 * sizeof(double) + sizeof(VertexId);

    RTree2D() = default;

    /// Throws InputError if fanout < 2 or a point is non-finite.
    static RTree2D bulk_build(std::vector<Entry> entries, std::size_t fanout = kDefaultFanout);

    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::size_t fanout() const noexcept { return fanout_; }
    [[nodiscard]] std::size_t height() const noexcept { return levels_.size(); }

    /// True iff some stored point lies in `r` (closed bounds). Stops at the first hit.
    [[nodiscard]] bool intersects(const Rect2D& r) const noexcept;
    /// Number of stored points in `r` (closed bounds).
    [[nodiscard]] std::size_t count_in(const Rect2D& r) const noexcept;

    /// header + kNodeBytes per node + kEntryBytes per entry.
    [[nodiscard]] std::size_t memory_footprint() const noexcept;
    [[nodiscard]] std::size_t node_count() const noexcept;

    [[nodiscard]] std::optional<Rect2D> root_box() const;
    [[nodiscard]] std::span<const Entry> entries() const noexcept { return entries_; }
    [[nodiscard]] const std::vector<std::vector<Node>>& levels() const noexcept { return levels_; }
    /// Sorted ids of the stored points.
    [[nodiscard]] std::vector<VertexId> ids() const;

    void serialize(ByteWriter& out) const;
    /// Validates structure after reading; throws FormatError on a corrupt tree.
    static RTree2D deserialize(ByteReader& in);

private:
    bool intersects_node(std::size_t level, std::uint32_t index, const Rect2D& r) const noexcept;
    std::size_t count_node(std::size_t level, std::uint32_t index, const Rect2D& r) const noexcept;

    std::size_t fanout_ = kDefaultFanout;
    std::vector<Entry> entries_;
    std::vector<std::vector<Node>> levels_;
};

/// Walks the whole tree and returns the first violated invariant, if any:
/// containment of children and entries, child ranges, fanout bounds, subtree
/// counts and equal leaf depth (implied by the level layout).
std::optional<std::string> check_invariants(const RTree2D& tree);

}  // namespace rangereach
