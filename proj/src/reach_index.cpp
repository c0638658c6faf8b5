#include "rangereach/reach_index.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace rangereach {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Standard: return "standard";
        case Variant::Compressed: return "comp";
        case Variant::Pointer: return "pointer";
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    if (name == "standard") return Variant::Standard;
    if (name == "comp" || name == "compressed") return Variant::Compressed;
    if (name == "pointer") return Variant::Pointer;
    throw InputError("unknown variant '" + std::string(name) + "' (expected standard, comp or pointer)");
}

ReachIndex ReachIndex::build(const GeosocialGraph& g, Variant variant, std::size_t fanout) {
    if (fanout < 2) throw InputError("R-tree fanout must be at least 2");
    const auto start = std::chrono::steady_clock::now();

    ReachIndex idx;
    idx.variant_ = variant;
    idx.fanout_ = fanout;
    idx.fingerprint_ = g.fingerprint();
    idx.coords_ = g.coords();
    idx.cond_ = condense(g, variant == Variant::Standard ? CondenseMode::Full
                                                         : CondenseMode::SocialOnly);
    const Condensation& cond = idx.cond_;
    const bool compress = variant != Variant::Standard;

    idx.comp_tree_.assign(cond.comp_count, kNoTree);
    idx.shared_from_.assign(cond.comp_count, kNoComponent);

    // Children are always finished first in reverse topological order, so a
    // component's reachable set is its own seeds plus the ids stored in its
    // children's trees.
    std::vector<ComponentId> stamp(g.vertex_count(), kNoComponent);
    std::vector<VertexId> reach;
    for (auto it = cond.topo_order.rbegin(); it != cond.topo_order.rend(); ++it) {
        const ComponentId c = *it;
        reach.clear();
        for (VertexId v : cond.member_spatial[c]) {
            stamp[v] = c;
            reach.push_back(v);
        }
        idx.union_work_ += cond.member_spatial[c].size();
        for (ComponentId child : cond.dag_adjacency[c]) {
            const TreeRef t = idx.comp_tree_[child];
            if (t == kNoTree) continue;
            const auto child_entries = idx.pool_[t].entries();
            idx.union_work_ += child_entries.size();
            for (const auto& e : child_entries) {
                if (stamp[e.id] != c) {
                    stamp[e.id] = c;
                    reach.push_back(e.id);
                }
            }
        }

        if (compress) {
            if (reach.empty()) continue;
            // A child's set is a subset of ours, so equal size means equal set.
            const auto& children = cond.dag_adjacency[c];
            auto same = std::find_if(children.begin(), children.end(), [&](ComponentId child) {
                const TreeRef t = idx.comp_tree_[child];
                return t != kNoTree && idx.pool_[t].size() == reach.size();
            });
            if (same != children.end()) {
                idx.comp_tree_[c] = idx.comp_tree_[*same];
                idx.shared_from_[c] = *same;
                continue;
            }
        }

        std::sort(reach.begin(), reach.end());
        std::vector<RTree2D::Entry> entries;
        entries.reserve(reach.size());
        for (VertexId v : reach) entries.push_back({*idx.coords_[v], v});
        idx.comp_tree_[c] = static_cast<TreeRef>(idx.pool_.size());
        idx.pool_.push_back(RTree2D::bulk_build(std::move(entries), fanout));
    }

    idx.derive_lookup_tables();
    idx.build_seconds_ =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return idx;
}

void ReachIndex::derive_lookup_tables() {
    const std::size_t n = coords_.size();
    vertex_tree_.clear();
    rank_comp_.clear();
    social_bits_ = RankBitVector();
    if (variant_ == Variant::Pointer) {
        std::vector<bool> bits(n, false);
        for (VertexId v = 0; v < n; ++v) {
            if (cond_.comp_of[v] != kNoComponent) {
                bits[v] = true;
                rank_comp_.push_back(cond_.comp_of[v]);
            }
        }
        social_bits_ = RankBitVector(bits);
        return;
    }
    vertex_tree_.assign(n, kNoTree);
    for (VertexId v = 0; v < n; ++v) {
        const ComponentId c = cond_.comp_of[v];
        if (c != kNoComponent) vertex_tree_[v] = comp_tree_[c];
    }
}

bool ReachIndex::query_unchecked(VertexId q, const Rect2D& r) const noexcept {
    switch (variant_) {
        case Variant::Standard:
            return pool_[vertex_tree_[q]].intersects(r);
        case Variant::Compressed: {
            const TreeRef t = vertex_tree_[q];
            if (t != kNoTree) return pool_[t].intersects(r);
            if (cond_.comp_of[q] == kNoComponent) return r.contains(*coords_[q]);
            return false;
        }
        case Variant::Pointer: {
            if (!social_bits_.get(q)) return r.contains(*coords_[q]);
            const TreeRef t = comp_tree_[rank_comp_[social_bits_.rank1(q)]];
            return t != kNoTree && pool_[t].intersects(r);
        }
    }
    return false;
}

bool ReachIndex::query(VertexId q, const Rect2D& r) const {
    if (q >= vertex_count()) {
        throw std::out_of_range("query vertex " + std::to_string(q) + " out of range (n = " +
                                std::to_string(vertex_count()) + ")");
    }
    return query_unchecked(q, r);
}

TreeRef ReachIndex::tree_of_vertex(VertexId v) const {
    if (v >= vertex_count()) throw std::out_of_range("vertex id out of range");
    if (variant_ == Variant::Pointer) {
        if (!social_bits_.get(v)) return kNoTree;
        return comp_tree_[rank_comp_[social_bits_.rank1(v)]];
    }
    return vertex_tree_[v];
}

TreeRef ReachIndex::tree_of_component(ComponentId c) const {
    if (c >= comp_tree_.size()) throw std::out_of_range("component id out of range");
    return comp_tree_[c];
}

std::optional<ComponentId> ReachIndex::shared_with(ComponentId c) const {
    if (c >= shared_from_.size()) throw std::out_of_range("component id out of range");
    if (shared_from_[c] == kNoComponent) return std::nullopt;
    return shared_from_[c];
}

std::vector<VertexId> ReachIndex::reachable_set(ComponentId c) const {
    const TreeRef t = tree_of_component(c);
    if (t == kNoTree) return {};
    return pool_[t].ids();
}

IndexStats index_stats(const ReachIndex& idx) {
    IndexStats s;
    const Condensation& cond = idx.condensation();
    s.variant = idx.variant();
    s.vertex_count = idx.fingerprint().vertex_count;
    s.spatial_count = idx.fingerprint().spatial_count;
    s.component_count = cond.comp_count;
    s.dag_edge_count = cond.dag_edge_count();
    s.distinct_trees = idx.pool().size();
    for (const auto& tree : idx.pool()) {
        s.pooled_points += tree.size();
        s.rtree_bytes += tree.memory_footprint();
    }
    for (ComponentId c = 0; c < cond.comp_count; ++c) {
        if (idx.shared_with(c)) ++s.shared_components;
        if (cond.member_spatial[c].empty()) ++s.components_without_own_spatial;
        const TreeRef t = idx.tree_of_component(c);
        if (t == kNoTree || idx.pool()[t].empty()) ++s.components_without_reachable_spatial;
    }
    s.condensation_bytes = cond.memory_bytes();
    if (idx.variant() == Variant::Pointer) {
        s.pointer_bytes = cond.comp_count * sizeof(TreeRef) + idx.social_bits().memory_bytes();
        // the rank-indexed component table replaces the full-length comp_of
        s.condensation_bytes -= cond.comp_of.size() * sizeof(ComponentId);
        s.condensation_bytes += idx.social_bits().count_ones() * sizeof(ComponentId);
    } else {
        s.pointer_bytes = idx.vertex_count() * sizeof(TreeRef);
    }
    s.union_work = idx.union_work();
    s.build_seconds = idx.build_seconds();
    return s;
}

}  // namespace rangereach
