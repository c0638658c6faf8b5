#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rangereach/oracle.hpp"
#include "rangereach/reach_index.hpp"
#include "support.hpp"

using namespace rangereach;
using namespace rangereach::testing;

namespace {

constexpr Variant kVariants[] = {Variant::Standard, Variant::Compressed, Variant::Pointer};

/// Spatial vertices reachable from v, from the closure.
std::vector<VertexId> reachable_spatial(const GeosocialGraph& g,
                                        const std::vector<std::vector<bool>>& reach, VertexId v) {
    std::vector<VertexId> out;
    for (VertexId w : g.spatial_ids()) {
        if (reach[v][w]) out.push_back(w);
    }
    return out;
}

bool brute_answer(const GeosocialGraph& g, const std::vector<std::vector<bool>>& reach, VertexId q,
                  const Rect2D& r) {
    for (VertexId w : g.spatial_ids()) {
        if (reach[q][w] && r.contains(*g.coord(w))) return true;
    }
    return false;
}

std::vector<std::size_t> pool_sizes(const ReachIndex& idx) {
    std::vector<std::size_t> sizes;
    for (const auto& t : idx.pool()) sizes.push_back(t.size());
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

/// users 0..4 in a chain, venues 5..9
GeosocialGraph chain(bool venues_at_end) {
    std::vector<std::vector<VertexId>> adj(10);
    std::vector<std::optional<Point2D>> coords(10);
    for (VertexId u = 0; u < 4; ++u) adj[u].push_back(u + 1);
    for (VertexId k = 0; k < 5; ++k) {
        coords[5 + k] = Point2D{static_cast<double>(k), static_cast<double>(k)};
        adj[venues_at_end ? 4 : k].push_back(5 + k);
    }
    return GeosocialGraph(adj, std::move(coords));
}

}  // namespace

TEST_CASE("toy graph, standard") {
    const auto g = toy_graph();
    const auto idx = ReachIndex::build(g, Variant::Standard);
    const auto s = index_stats(idx);
    CHECK(s.component_count == 6);
    CHECK(s.distinct_trees == 6);
    const auto& c = idx.condensation();
    CHECK(idx.reachable_set(c.comp_of[A]) == std::vector<VertexId>{F, G, H, I});
    CHECK(idx.reachable_set(c.comp_of[D]) == std::vector<VertexId>{H, I});
    CHECK(idx.reachable_set(c.comp_of[F]) == std::vector<VertexId>{F});
    for (VertexId v = 0; v < 9; ++v) CHECK(idx.tree_of_vertex(v) != kNoTree);
    CHECK(idx.tree_of_vertex(A) == idx.tree_of_vertex(C));
    CHECK(idx.pool()[idx.tree_of_vertex(A)].ids() == std::vector<VertexId>{F, G, H, I});
}

TEST_CASE("toy graph, compressed and pointer") {
    const auto g = toy_graph();
    for (Variant v : {Variant::Compressed, Variant::Pointer}) {
        const auto idx = ReachIndex::build(g, v);
        const auto s = index_stats(idx);
        CHECK(s.component_count == 2);
        CHECK(s.distinct_trees == 2);
        CHECK(s.shared_components == 0);
        std::set<std::vector<VertexId>> trees;
        for (const auto& t : idx.pool()) trees.insert(t.ids());
        CHECK(trees == std::set<std::vector<VertexId>>{{F, G, H, I}, {H, I}});
        for (VertexId sp : {F, G, H, I}) CHECK(idx.tree_of_vertex(sp) == kNoTree);
    }
    const auto ptr = ReachIndex::build(g, Variant::Pointer);
    CHECK(ptr.social_bits().size() == 9);
    CHECK(ptr.social_bits().count_ones() == 5);
}

TEST_CASE("toy graph query") {
    const auto g = toy_graph();
    const Rect2D r{kToyR[0], kToyR[1], kToyR[2], kToyR[3]};
    const Rect2D only_f{kToyOnlyF[0], kToyOnlyF[1], kToyOnlyF[2], kToyOnlyF[3]};
    REQUIRE(r.contains(*g.coord(H)));
    REQUIRE_FALSE(only_f.contains(*g.coord(H)));
    for (Variant v : kVariants) {
        const auto idx = ReachIndex::build(g, v);
        CHECK(idx.query(A, r));
        CHECK_FALSE(idx.query(D, only_f));
        CHECK(idx.query(A, only_f));
        CHECK(idx.query(F, only_f));       // spatial q inside r
        CHECK_FALSE(idx.query(G, only_f));  // spatial sink elsewhere
        CHECK_FALSE(idx.query(B, {10, 10, 11, 11}));
        CHECK_THROWS_AS((void)idx.query(9, r), std::out_of_range);
    }
}

TEST_CASE("chain with one venue per user") {
    const auto g = chain(false);
    const auto idx = ReachIndex::build(g, Variant::Compressed);
    CHECK(pool_sizes(idx) == std::vector<std::size_t>{5, 4, 3, 2, 1});
    const auto ptr = ReachIndex::build(g, Variant::Pointer);
    CHECK(pool_sizes(ptr) == std::vector<std::size_t>{5, 4, 3, 2, 1});
    CHECK(idx.union_work() == 5 + (1 + 2 + 3 + 4));
}

TEST_CASE("chain with all venues at the end shares one tree") {
    const auto g = chain(true);
    for (Variant v : {Variant::Compressed, Variant::Pointer}) {
        const auto idx = ReachIndex::build(g, v);
        CHECK(pool_sizes(idx) == std::vector<std::size_t>{5});
        const auto s = index_stats(idx);
        CHECK(s.shared_components == 4);
        CHECK(s.components_without_own_spatial == 4);
        for (VertexId u = 0; u < 5; ++u) CHECK(idx.tree_of_vertex(u) == 0);
        const auto& c = idx.condensation();
        CHECK(idx.shared_with(c.comp_of[3]) == c.comp_of[4]);
        CHECK_FALSE(idx.shared_with(c.comp_of[4]).has_value());
    }
}

TEST_CASE("sibling components with equal sets are not merged") {
    // 0 -> 2 and 1 -> 2, 2 -> venue 3: parent/child sharing only
    const GeosocialGraph g({{2}, {2}, {3}, {}}, {std::nullopt, std::nullopt, std::nullopt, Point2D{0, 0}});
    const auto idx = ReachIndex::build(g, Variant::Compressed);
    CHECK(idx.pool().size() == 1);
    // 0 and 1 share with 2; not with each other
    const auto& c = idx.condensation();
    CHECK(idx.shared_with(c.comp_of[0]) == c.comp_of[2]);
    CHECK(idx.shared_with(c.comp_of[1]) == c.comp_of[2]);

    // siblings 1 and 2 under 0 with equal sets but no parent/child relation
    const GeosocialGraph h({{1, 2}, {3}, {3}, {}, {}},
                           {std::nullopt, std::nullopt, std::nullopt, Point2D{0, 0}, Point2D{1, 1}});
    // 1 and 2 both reach {3} only; they keep separate trees
    const auto hidx = ReachIndex::build(h, Variant::Compressed);
    CHECK(hidx.tree_of_vertex(1) != hidx.tree_of_vertex(2));
    CHECK(hidx.pool().size() == 2);
    // 0 reaches {3} as well: shares with the first equal child
    CHECK(hidx.tree_of_vertex(0) == hidx.tree_of_vertex(1));
}

TEST_CASE("no spatial vertices") {
    const GeosocialGraph g({{1}, {2}, {}}, std::vector<std::optional<Point2D>>(3));
    const auto std_idx = ReachIndex::build(g, Variant::Standard);
    CHECK(std_idx.pool().size() == 3);
    for (const auto& t : std_idx.pool()) CHECK(t.empty());
    for (Variant v : {Variant::Compressed, Variant::Pointer}) {
        const auto idx = ReachIndex::build(g, v);
        CHECK(idx.pool().empty());
        CHECK(index_stats(idx).components_without_reachable_spatial == 3);
        CHECK_FALSE(idx.query(0, {-1e9, -1e9, 1e9, 1e9}));
    }
}

TEST_CASE("empty graph has all-zero stats") {
    for (Variant v : kVariants) {
        const auto idx = ReachIndex::build(GeosocialGraph{}, v);
        const auto s = index_stats(idx);
        CHECK(s.vertex_count == 0);
        CHECK(s.component_count == 0);
        CHECK(s.dag_edge_count == 0);
        CHECK(s.distinct_trees == 0);
        CHECK(s.pooled_points == 0);
        CHECK(s.rtree_bytes == 0);
        CHECK(s.union_work == 0);
    }
}

TEST_CASE("fanout below 2 is rejected") {
    CHECK_THROWS_AS(ReachIndex::build(toy_graph(), Variant::Standard, 1), InputError);
}

TEST_CASE("random graphs: every variant agrees with brute force") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.1, 1.1);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng() % 120;
        const double density = std::uniform_real_distribution<double>(0.0, 0.08)(rng);
        const auto g = trial % 2 ? random_digraph(n, density, 0.5, rng)
                                 : generate_graph(n / 2 + 1, n / 2, std::min(1.5, 0.5 * static_cast<double>(n / 2)), 1, rng());
        const auto reach = closure(g);
        const std::size_t fanout = 2 + rng() % 10;
        std::vector<ReachIndex> idx;
        for (Variant v : kVariants) idx.push_back(ReachIndex::build(g, v, fanout));

        // reachable sets per component against the closure
        for (const auto& ix : idx) {
            const auto& c = ix.condensation();
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                if (c.comp_of[v] == kNoComponent) continue;
                CHECK(ix.reachable_set(c.comp_of[v]) == reachable_spatial(g, reach, v));
            }
            const auto s = index_stats(ix);
            CHECK(s.pooled_points <= s.component_count * s.spatial_count);
            const double d = static_cast<double>(s.component_count);
            const double p = static_cast<double>(s.spatial_count);
            if (p > 0) CHECK(static_cast<double>(s.union_work) <= d * p * (d + std::log2(std::max(p, 2.0))));
        }

        for (int q = 0; q < 200; ++q) {
            const VertexId v = static_cast<VertexId>(rng() % g.vertex_count());
            double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
            if (x0 > x1) std::swap(x0, x1);
            if (y0 > y1) std::swap(y0, y1);
            const Rect2D r{x0, y0, x1, y1};
            const bool expected = brute_answer(g, reach, v, r);
            for (const auto& ix : idx) CHECK(ix.query(v, r) == expected);
        }
    }
}

TEST_CASE("pointer references resolve like the compressed table") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_digraph(80, 0.03, 0.5, rng);
        const auto comp = ReachIndex::build(g, Variant::Compressed);
        const auto ptr = ReachIndex::build(g, Variant::Pointer);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            const bool social = comp.condensation().comp_of[v] != kNoComponent;
            CHECK(ptr.social_bits().get(v) == social);
            CHECK(ptr.tree_of_vertex(v) == comp.tree_of_vertex(v));
        }
        CHECK(index_stats(ptr).pointer_bytes < index_stats(comp).pointer_bytes + 1024);
    }
}

TEST_CASE("members of one component answer alike") {
    std::mt19937_64 rng(9);
    const auto g = random_digraph(60, 0.06, 0.3, rng);
    const auto idx = ReachIndex::build(g, Variant::Compressed);
    const auto& c = idx.condensation();
    for (VertexId a = 0; a < 60; ++a) {
        for (VertexId b = a + 1; b < 60; ++b) {
            if (c.comp_of[a] == kNoComponent || c.comp_of[a] != c.comp_of[b]) continue;
            if (g.coord(a) || g.coord(b)) continue;
            for (int q = 0; q < 10; ++q) {
                const double x = std::uniform_real_distribution<double>(0, 0.8)(rng);
                const Rect2D r{x, x, x + 0.2, x + 0.2};
                CHECK(idx.query(a, r) == idx.query(b, r));
            }
        }
    }
}

TEST_CASE("monotone along DAG edges") {
    std::mt19937_64 rng(13);
    const auto g = random_digraph(150, 0.02, 0.4, rng);
    for (Variant v : kVariants) {
        const auto idx = ReachIndex::build(g, v);
        const auto& c = idx.condensation();
        for (ComponentId p = 0; p < c.comp_count; ++p) {
            const auto parent = idx.reachable_set(p);
            for (ComponentId ch : c.dag_adjacency[p]) {
                const auto child = idx.reachable_set(ch);
                CHECK(std::includes(parent.begin(), parent.end(), child.begin(), child.end()));
            }
        }
    }
}

TEST_CASE("builds are deterministic") {
    const auto g = generate_graph(300, 200, 3, 3, 1);
    for (Variant v : kVariants) {
        std::ostringstream a, b;
        ReachIndex::build(g, v).serialize(a);
        ReachIndex::build(g, v).serialize(b);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("variant names") {
    CHECK(parse_variant("standard") == Variant::Standard);
    CHECK(parse_variant("comp") == Variant::Compressed);
    CHECK(parse_variant("compressed") == Variant::Compressed);
    CHECK(parse_variant("pointer") == Variant::Pointer);
    CHECK(to_string(Variant::Compressed) == "comp");
    CHECK_THROWS_AS(parse_variant("bogus"), InputError);
}
