#include "rangereach/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace rangereach {

namespace {

struct SortItem {
    double x;
    double y;
    std::uint64_t tie;
    std::uint32_t index;
};

/// Sort-Tile-Recursive grouping of `items`. Returns the packed order (as
/// indices into the input) and fills `group_sizes` with the number of
/// consecutive packed items per parent node.
std::vector<std::uint32_t> str_pack(std::vector<SortItem> items, std::size_t fanout,
                                    std::vector<std::uint32_t>& group_sizes) {
    const std::size_t k = items.size();
    const std::size_t groups = (k + fanout - 1) / fanout;
    group_sizes.assign(groups, static_cast<std::uint32_t>(k / groups));
    for (std::size_t i = 0; i < k % groups; ++i) ++group_sizes[i];

    auto by_x = [](const SortItem& a, const SortItem& b) {
        return std::tie(a.x, a.y, a.tie) < std::tie(b.x, b.y, b.tie);
    };
    auto by_y = [](const SortItem& a, const SortItem& b) {
        return std::tie(a.y, a.x, a.tie) < std::tie(b.y, b.x, b.tie);
    };
    std::sort(items.begin(), items.end(), by_x);

    const auto slabs = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(groups))));
    std::size_t item_pos = 0;
    for (std::size_t s = 0; s < slabs; ++s) {
        const std::size_t g_begin = s * groups / slabs;
        const std::size_t g_end = (s + 1) * groups / slabs;
        std::size_t slab_items = 0;
        for (std::size_t g = g_begin; g < g_end; ++g) slab_items += group_sizes[g];
        std::sort(items.begin() + static_cast<std::ptrdiff_t>(item_pos),
                  items.begin() + static_cast<std::ptrdiff_t>(item_pos + slab_items), by_y);
        item_pos += slab_items;
    }

    std::vector<std::uint32_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = items[i].index;
    return order;
}

}  // namespace

RTree2D RTree2D::bulk_build(std::vector<Entry> entries, std::size_t fanout) {
    if (fanout < 2) throw InputError("R-tree fanout must be at least 2");
    if (entries.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw InputError("too many points for one R-tree");
    }
    for (const auto& e : entries) {
        if (!e.point.finite()) throw InputError("R-tree point must be finite");
    }

    RTree2D tree;
    tree.fanout_ = fanout;
    if (entries.empty()) return tree;

    std::vector<std::uint32_t> group_sizes;
    {
        std::vector<SortItem> items(entries.size());
        for (std::uint32_t i = 0; i < entries.size(); ++i) {
            items[i] = {entries[i].point.x, entries[i].point.y, entries[i].id, i};
        }
        auto order = str_pack(std::move(items), fanout, group_sizes);
        tree.entries_.reserve(entries.size());
        for (std::uint32_t i : order) tree.entries_.push_back(entries[i]);
    }

    std::vector<Node> level;
    level.reserve(group_sizes.size());
    std::uint32_t pos = 0;
    for (std::uint32_t size : group_sizes) {
        Node node;
        node.box = Rect2D::empty_bounds();
        node.first_child = pos;
        node.child_count = size;
        node.subtree_size = size;
        for (std::uint32_t i = pos; i < pos + size; ++i) node.box.expand(tree.entries_[i].point);
        level.push_back(node);
        pos += size;
    }
    tree.levels_.push_back(std::move(level));

    while (tree.levels_.back().size() > 1) {
        std::vector<Node>& below = tree.levels_.back();
        std::vector<SortItem> items(below.size());
        for (std::uint32_t i = 0; i < below.size(); ++i) {
            const Point2D c = below[i].box.center();
            items[i] = {c.x, c.y, i, i};
        }
        auto order = str_pack(std::move(items), fanout, group_sizes);
        std::vector<Node> packed;
        packed.reserve(below.size());
        for (std::uint32_t i : order) packed.push_back(below[i]);
        below = std::move(packed);

        std::vector<Node> parents;
        parents.reserve(group_sizes.size());
        pos = 0;
        for (std::uint32_t size : group_sizes) {
            Node node;
            node.box = Rect2D::empty_bounds();
            node.first_child = pos;
            node.child_count = size;
            for (std::uint32_t i = pos; i < pos + size; ++i) {
                node.box.expand(below[i].box);
                node.subtree_size += below[i].subtree_size;
            }
            parents.push_back(node);
            pos += size;
        }
        tree.levels_.push_back(std::move(parents));
    }

    // Packing a level reorders it, so lay each level out again in parent order.
    for (std::size_t l = tree.levels_.size() - 1; l > 0; --l) {
        std::vector<Node> laid_out;
        laid_out.reserve(tree.levels_[l - 1].size());
        for (Node& parent : tree.levels_[l]) {
            const auto first = static_cast<std::uint32_t>(laid_out.size());
            for (std::uint32_t c = 0; c < parent.child_count; ++c) {
                laid_out.push_back(tree.levels_[l - 1][parent.first_child + c]);
            }
            parent.first_child = first;
        }
        tree.levels_[l - 1] = std::move(laid_out);
    }
    std::vector<Entry> laid_out;
    laid_out.reserve(tree.entries_.size());
    for (Node& leaf : tree.levels_[0]) {
        const auto first = static_cast<std::uint32_t>(laid_out.size());
        for (std::uint32_t c = 0; c < leaf.child_count; ++c) laid_out.push_back(tree.entries_[leaf.first_child + c]);
        leaf.first_child = first;
    }
    tree.entries_ = std::move(laid_out);
    return tree;
}

bool RTree2D::intersects_node(std::size_t level, std::uint32_t index,
                              const Rect2D& r) const noexcept {
    const Node& node = levels_[level][index];
    if (!r.intersects(node.box)) return false;
    if (r.contains(node.box)) return true;  // nodes are never empty
    const std::uint32_t end = node.first_child + node.child_count;
    if (level == 0) {
        for (std::uint32_t i = node.first_child; i < end; ++i) {
            if (r.contains(entries_[i].point)) return true;
        }
        return false;
    }
    for (std::uint32_t i = node.first_child; i < end; ++i) {
        if (intersects_node(level - 1, i, r)) return true;
    }
    return false;
}

std::size_t RTree2D::count_node(std::size_t level, std::uint32_t index,
                                const Rect2D& r) const noexcept {
    const Node& node = levels_[level][index];
    if (!r.intersects(node.box)) return 0;
    if (r.contains(node.box)) return node.subtree_size;
    const std::uint32_t end = node.first_child + node.child_count;
    std::size_t count = 0;
    if (level == 0) {
        for (std::uint32_t i = node.first_child; i < end; ++i) {
            count += r.contains(entries_[i].point) ? 1 : 0;
        }
        return count;
    }
    for (std::uint32_t i = node.first_child; i < end; ++i) count += count_node(level - 1, i, r);
    return count;
}

bool RTree2D::intersects(const Rect2D& r) const noexcept {
    if (levels_.empty()) return false;
    return intersects_node(levels_.size() - 1, 0, r);
}

std::size_t RTree2D::count_in(const Rect2D& r) const noexcept {
    if (levels_.empty()) return 0;
    return count_node(levels_.size() - 1, 0, r);
}

std::size_t RTree2D::node_count() const noexcept {
    std::size_t nodes = 0;
    for (const auto& level : levels_) nodes += level.size();
    return nodes;
}

std::size_t RTree2D::memory_footprint() const noexcept {
    return kHeaderBytes + node_count() * kNodeBytes + entries_.size() * kEntryBytes;
}

std::optional<Rect2D> RTree2D::root_box() const {
    if (levels_.empty()) return std::nullopt;
    return levels_.back().front().box;
}

std::vector<VertexId> RTree2D::ids() const {
    std::vector<VertexId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.id);
    std::sort(out.begin(), out.end());
    return out;
}

void RTree2D::serialize(ByteWriter& out) const {
    out.u64(fanout_);
    out.u64(entries_.size());
    for (const auto& e : entries_) {
        out.f64(e.point.x);
        out.f64(e.point.y);
        out.u32(e.id);
    }
    out.u32(static_cast<std::uint32_t>(levels_.size()));
    for (const auto& level : levels_) {
        out.u64(level.size());
        for (const auto& node : level) {
            out.f64(node.box.min_x);
            out.f64(node.box.min_y);
            out.f64(node.box.max_x);
            out.f64(node.box.max_y);
            out.u32(node.first_child);
            out.u32(node.child_count);
            out.u32(node.subtree_size);
        }
    }
}

RTree2D RTree2D::deserialize(ByteReader& in) {
    constexpr std::uint64_t kMaxCount = std::numeric_limits<std::uint32_t>::max();
    RTree2D tree;
    tree.fanout_ = in.u64();
    if (tree.fanout_ < 2 || tree.fanout_ > kMaxCount) throw FormatError("bad R-tree fanout");
    const std::uint64_t size = in.u64();
    if (size > kMaxCount) throw FormatError("bad R-tree size");
    tree.entries_.resize(size);
    for (auto& e : tree.entries_) {
        e.point.x = in.f64();
        e.point.y = in.f64();
        e.id = in.u32();
    }
    const std::uint32_t height = in.u32();
    if (height > 64) throw FormatError("bad R-tree height");
    tree.levels_.resize(height);
    for (auto& level : tree.levels_) {
        const std::uint64_t count = in.u64();
        if (count > size) throw FormatError("bad R-tree level size");
        level.resize(count);
        for (auto& node : level) {
            node.box.min_x = in.f64();
            node.box.min_y = in.f64();
            node.box.max_x = in.f64();
            node.box.max_y = in.f64();
            node.first_child = in.u32();
            node.child_count = in.u32();
            node.subtree_size = in.u32();
        }
    }
    if (auto violation = check_invariants(tree)) {
        throw FormatError("corrupt R-tree: " + *violation);
    }
    return tree;
}

std::optional<std::string> check_invariants(const RTree2D& tree) {
    const auto& levels = tree.levels();
    const auto entries = tree.entries();
    const std::size_t fanout = tree.fanout();
    const std::size_t min_fill = (fanout + 1) / 2;

    if (entries.empty()) {
        if (!levels.empty()) return "empty tree has nodes";
        return std::nullopt;
    }
    if (levels.empty()) return "non-empty tree has no nodes";
    if (levels.back().size() != 1) return "top level does not hold exactly one root";

    for (std::size_t l = 0; l < levels.size(); ++l) {
        const auto& level = levels[l];
        const bool is_root_level = l + 1 == levels.size();
        const std::size_t below = l == 0 ? entries.size() : levels[l - 1].size();
        std::size_t expected_first = 0;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const auto& node = level[i];
            std::ostringstream where;
            where << "level " << l << " node " << i << ": ";
            if (!node.box.valid()) return where.str() + "invalid bounding box";
            if (node.child_count == 0 || node.child_count > fanout) {
                return where.str() + "child count " + std::to_string(node.child_count) +
                       " outside [1, M]";
            }
            if (!is_root_level && node.child_count < min_fill) {
                return where.str() + "underfull node";
            }
            if (node.first_child != expected_first) return where.str() + "children not contiguous";
            if (static_cast<std::size_t>(node.first_child) + node.child_count > below) {
                return where.str() + "child range out of bounds";
            }
            expected_first = node.first_child + node.child_count;

            std::size_t subtree = 0;
            for (std::uint32_t c = node.first_child; c < expected_first; ++c) {
                if (l == 0) {
                    if (!node.box.contains(entries[c].point)) {
                        return where.str() + "entry outside leaf box";
                    }
                    ++subtree;
                } else {
                    const auto& child = levels[l - 1][c];
                    if (!node.box.contains(child.box)) return where.str() + "child box not contained";
                    subtree += child.subtree_size;
                }
            }
            if (subtree != node.subtree_size) return where.str() + "wrong subtree size";
        }
        if (expected_first != below) return "level " + std::to_string(l) + " does not cover the level below";
    }
    if (levels.back().front().subtree_size != entries.size()) return "root size mismatch";
    return std::nullopt;
}

}  // namespace rangereach
