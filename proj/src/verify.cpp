#include "rangereach/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "rangereach/kernels.hpp"
#include "rangereach/oracle.hpp"
#include "text_util.hpp"

namespace rangereach {

namespace {

std::string describe(const Query& q) {
    std::ostringstream os;
    os << "vertex " << q.vertex << " rect [" << q.rect.min_x << ", " << q.rect.min_y << ", "
       << q.rect.max_x << ", " << q.rect.max_y << "]";
    return os.str();
}

std::vector<VertexId> spatial_reachable(const GeosocialGraph& g, VertexId v) {
    std::vector<VertexId> out;
    for (VertexId u : reachable_from(g, v)) {
        if (g.is_spatial(u)) out.push_back(u);
    }
    return out;
}

}  // namespace

std::optional<std::string> check_condensation(const GeosocialGraph& g, const Condensation& c) {
    const std::size_t n = g.vertex_count();
    if (c.comp_of.size() != n) return "comp_of has the wrong length";
    if (c.dag_adjacency.size() != c.comp_count || c.member_spatial.size() != c.comp_count) {
        return "per-component tables have the wrong length";
    }
    if (c.topo_order.size() != c.comp_count) return "topological order has the wrong length";

    std::vector<std::size_t> position(c.comp_count, c.comp_count);
    for (std::size_t i = 0; i < c.topo_order.size(); ++i) {
        const ComponentId comp = c.topo_order[i];
        if (comp >= c.comp_count || position[comp] != c.comp_count) {
            return "topological order is not a permutation";
        }
        position[comp] = i;
    }
    for (ComponentId u = 0; u < c.comp_count; ++u) {
        const auto& succ = c.dag_adjacency[u];
        if (!std::is_sorted(succ.begin(), succ.end()) ||
            std::adjacent_find(succ.begin(), succ.end()) != succ.end()) {
            return "DAG successor list not sorted and deduplicated";
        }
        for (ComponentId v : succ) {
            if (v == u) return "component self-edge";
            if (position[u] >= position[v]) return "DAG edge against the topological order";
        }
    }

    const ReachabilityMatrix reach = full_matrix(g);
    std::size_t members = 0;
    for (VertexId u = 0; u < n; ++u) {
        const bool excluded = c.mode == CondenseMode::SocialOnly && is_spatial_sink(g, u);
        if (excluded != (c.comp_of[u] == kNoComponent)) {
            return "vertex " + std::to_string(u) + " has the wrong inclusion status";
        }
        if (excluded) continue;
        ++members;
        for (VertexId v = 0; v < n; ++v) {
            if (c.comp_of[v] == kNoComponent) continue;
            const bool mutual = reach.reaches(u, v) && reach.reaches(v, u);
            if (mutual != (c.comp_of[u] == c.comp_of[v])) {
                return "vertices " + std::to_string(u) + " and " + std::to_string(v) +
                       " are grouped inconsistently with mutual reachability";
            }
        }
    }
    const auto sizes = c.component_sizes();
    if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) != members) {
        return "component sizes do not add up";
    }

    std::vector<std::vector<VertexId>> expected(c.comp_count);
    for (VertexId u = 0; u < n; ++u) {
        const ComponentId cu = c.comp_of[u];
        if (cu == kNoComponent) continue;
        if (g.is_spatial(u)) expected[cu].push_back(u);
        if (c.mode == CondenseMode::SocialOnly) {
            for (VertexId w : g.out_neighbors(u)) {
                if (c.comp_of[w] == kNoComponent) expected[cu].push_back(w);
            }
        }
    }
    for (ComponentId comp = 0; comp < c.comp_count; ++comp) {
        auto& e = expected[comp];
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        if (e != c.member_spatial[comp]) {
            return "member_spatial of component " + std::to_string(comp) + " is wrong";
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_size_bounds(const ReachIndex& idx) {
    const IndexStats s = index_stats(idx);
    const double d = static_cast<double>(s.component_count);
    const double p = static_cast<double>(s.spatial_count);
    if (static_cast<double>(s.pooled_points) > d * p) {
        return "pooled points " + std::to_string(s.pooled_points) + " exceed d*p";
    }
    const double log_p = p > 0 ? std::log2(p) : 0.0;
    if (static_cast<double>(s.union_work) > d * p * (d + log_p)) {
        return "union work " + std::to_string(s.union_work) + " exceeds d*p*(d + log2 p)";
    }
    return std::nullopt;
}

std::optional<std::string> check_index(const GeosocialGraph& g, const ReachIndex& idx) {
    if (idx.fingerprint() != g.fingerprint()) return "fingerprint does not match the graph";
    const Condensation& c = idx.condensation();
    const bool compressed = idx.variant() != Variant::Standard;
    if (c.mode != (compressed ? CondenseMode::SocialOnly : CondenseMode::Full)) {
        return "condensation mode does not match the variant";
    }
    const auto pool = idx.pool();
    for (std::size_t t = 0; t < pool.size(); ++t) {
        if (auto v = check_invariants(pool[t])) return "tree " + std::to_string(t) + ": " + *v;
        if (pool[t].fanout() != idx.fanout()) return "tree built with the wrong fanout";
    }

    std::vector<VertexId> representative(c.comp_count, kInvalidVertex);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const ComponentId comp = c.comp_of[v];
        const TreeRef t = idx.tree_of_vertex(v);
        if (t != kNoTree && t >= pool.size()) return "dangling tree reference";
        if (comp == kNoComponent) {
            if (t != kNoTree) return "spatial sink " + std::to_string(v) + " has a tree";
            continue;
        }
        if (t != idx.tree_of_component(comp)) return "vertex and component tables disagree";
        if (representative[comp] == kInvalidVertex) representative[comp] = v;
    }

    std::vector<std::vector<VertexId>> sets(c.comp_count);
    std::vector<std::size_t> owners(pool.size(), 0);
    for (ComponentId comp = 0; comp < c.comp_count; ++comp) {
        const TreeRef t = idx.tree_of_component(comp);
        const auto expected = spatial_reachable(g, representative[comp]);
        if (t == kNoTree) {
            if (!compressed) return "standard component without a tree";
            if (!expected.empty()) return "component " + std::to_string(comp) + " lost its tree";
        } else {
            if (compressed && pool[t].empty()) return "compressed index stores an empty tree";
            if (!idx.shared_with(comp)) ++owners[t];
        }
        sets[comp] = idx.reachable_set(comp);
        if (sets[comp] != expected) {
            return "component " + std::to_string(comp) + " stores the wrong reachable set";
        }
    }
    for (std::size_t t = 0; t < pool.size(); ++t) {
        if (owners[t] != 1) return "tree " + std::to_string(t) + " is not owned by exactly one component";
    }

    for (ComponentId comp = 0; comp < c.comp_count; ++comp) {
        const auto& children = c.dag_adjacency[comp];
        for (ComponentId child : children) {
            if (!std::includes(sets[comp].begin(), sets[comp].end(), sets[child].begin(),
                               sets[child].end())) {
                return "child " + std::to_string(child) + " reaches more than parent " +
                       std::to_string(comp);
            }
        }
        const auto shared = idx.shared_with(comp);
        if (!compressed) {
            if (shared) return "standard index shares trees";
            continue;
        }
        const bool has_equal_child = !sets[comp].empty() &&
            std::any_of(children.begin(), children.end(),
                        [&](ComponentId child) { return sets[child] == sets[comp]; });
        if (has_equal_child != shared.has_value()) {
            return "component " + std::to_string(comp) + " violates the sharing rule";
        }
        if (shared) {
            if (std::find(children.begin(), children.end(), *shared) == children.end()) {
                return "component shares with a non-child";
            }
            if (idx.tree_of_component(comp) != idx.tree_of_component(*shared)) {
                return "shared component references a different tree";
            }
        }
    }
    return check_size_bounds(idx);
}

std::optional<std::string> check_pointer_resolution(const ReachIndex& compressed,
                                                    const ReachIndex& pointer) {
    if (compressed.variant() != Variant::Compressed || pointer.variant() != Variant::Pointer) {
        return "expected a Compressed and a Pointer index";
    }
    if (compressed.vertex_count() != pointer.vertex_count()) return "vertex counts differ";
    const auto& bits = pointer.social_bits();
    std::size_t social = 0;
    for (VertexId v = 0; v < pointer.vertex_count(); ++v) {
        const bool in_social = compressed.condensation().comp_of[v] != kNoComponent;
        if (bits.get(v) != in_social) return "bit vector disagrees for vertex " + std::to_string(v);
        if (bits.rank1(v) != social) return "rank is wrong at vertex " + std::to_string(v);
        if (in_social) ++social;
        if (pointer.tree_of_vertex(v) != compressed.tree_of_vertex(v)) {
            return "vertex " + std::to_string(v) + " resolves to a different tree";
        }
    }
    return std::nullopt;
}

std::vector<Query> random_queries(const GeosocialGraph& g, std::size_t count, std::mt19937_64& rng) {
    std::vector<Query> out;
    if (g.vertex_count() == 0) return out;
    out.reserve(count);
    Rect2D box = g.spatial_bounds();
    if (g.spatial_count() == 0) box = Rect2D{0.0, 0.0, 1.0, 1.0};
    const double pad_x = std::max(box.width(), 1e-3) * 0.1;
    const double pad_y = std::max(box.height(), 1e-3) * 0.1;
    std::uniform_int_distribution<VertexId> pick_vertex(0, static_cast<VertexId>(g.vertex_count() - 1));
    std::uniform_real_distribution<double> ux(box.min_x - pad_x, box.max_x + pad_x);
    std::uniform_real_distribution<double> uy(box.min_y - pad_y, box.max_y + pad_y);
    std::uniform_int_distribution<int> kind(0, 3);
    const auto spatial = g.spatial_ids();

    for (std::size_t i = 0; i < count; ++i) {
        Query q;
        q.vertex = pick_vertex(rng);
        int k = kind(rng);
        if (spatial.empty() && (k == 1 || k == 2)) k = 0;
        switch (k) {
            case 0: {
                double x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
                q.rect = {std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1)};
                break;
            }
            case 1: {
                std::uniform_int_distribution<std::size_t> pick(0, spatial.size() - 1);
                q.rect = Rect2D::degenerate(*g.coord(spatial[pick(rng)]));
                break;
            }
            case 2: {
                std::uniform_int_distribution<std::size_t> pick(0, spatial.size() - 1);
                const Point2D p = *g.coord(spatial[pick(rng)]);
                std::uniform_real_distribution<double> r(0.0, pad_x);
                q.rect = {p.x - r(rng), p.y - r(rng), p.x + r(rng), p.y + r(rng)};
                break;
            }
            default: {
                const double x = box.max_x + 10.0 * pad_x;
                q.rect = {x, box.min_y, x + pad_x, box.max_y};
                break;
            }
        }
        out.push_back(q);
    }
    return out;
}

std::vector<Query> exhaustive_queries(const GeosocialGraph& g, std::size_t per_vertex,
                                      std::mt19937_64& rng) {
    const auto rects = random_queries(g, per_vertex, rng);
    std::vector<Query> out;
    out.reserve(g.vertex_count() * rects.size());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (const Query& r : rects) out.push_back({v, r.rect});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct TrialCase {
    GeosocialGraph graph;
    std::size_t fanout;
    bool lbsn;
};

TrialCase make_trial(const VerifyOptions& opt, std::size_t trial, std::mt19937_64& rng) {
    const std::size_t lo = std::max<std::size_t>(opt.min_vertices, 1);
    const std::size_t hi = std::max(lo, opt.max_vertices);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    static constexpr std::size_t kFanouts[] = {2, 3, 4, 16};
    const std::size_t fanout = kFanouts[std::uniform_int_distribution<int>(0, 3)(rng)];
    const std::uint64_t graph_seed = rng();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    if (trial % 2 == 0) {
        const auto users = static_cast<std::size_t>(std::llround(unit(rng) * static_cast<double>(n)));
        const std::size_t venues = n - users;
        const double social_max = users > 1 ? std::min(4.0, static_cast<double>(users - 1)) : 0.0;
        const double checkin_max = std::min(4.0, static_cast<double>(venues));
        const double social = unit(rng) * social_max;
        const double checkin = unit(rng) * checkin_max;
        return {generate_graph(users, venues, social, checkin, graph_seed), fanout, true};
    }
    const std::size_t max_edges = n > 1 ? std::min<std::size_t>(n * (n - 1), 3 * n) : 0;
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, max_edges)(rng);
    const double spatial_fraction = unit(rng);
    const unsigned grid = unit(rng) < 0.5 ? 8U : 0U;
    return {generate_general_graph(n, m, spatial_fraction, graph_seed, grid), fanout, false};
}

struct Divergence {
    Query query;
    bool expected;
    bool standard;
    bool compressed;
    bool pointer;
};

std::optional<Divergence> first_divergence(const GeosocialGraph& g, std::size_t fanout,
                                           const std::vector<Query>& queries, bool fault) {
    const auto standard = ReachIndex::build(g, Variant::Standard, fanout);
    const auto compressed = ReachIndex::build(g, Variant::Compressed, fanout);
    const auto pointer = ReachIndex::build(g, Variant::Pointer, fanout);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const Query& q = queries[i];
        Divergence d{q, range_reach_bfs(g, q.vertex, q.rect), standard.query(q.vertex, q.rect),
                     compressed.query(q.vertex, q.rect), pointer.query(q.vertex, q.rect)};
        if (fault && i == 0) d.standard = !d.standard;
        if (d.standard != d.expected || d.compressed != d.expected || d.pointer != d.expected) {
            return d;
        }
    }
    return std::nullopt;
}

/// Greedy edge removal while the single failing query keeps failing.
GeosocialGraph minimise(const GeosocialGraph& g, std::size_t fanout, const Query& query, bool fault) {
    std::vector<std::vector<VertexId>> adjacency(g.vertex_count());
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        auto succ = g.out_neighbors(u);
        adjacency[u].assign(succ.begin(), succ.end());
    }
    GeosocialGraph current = g;
    for (VertexId u = 0; u < adjacency.size(); ++u) {
        for (std::size_t i = 0; i < adjacency[u].size();) {
            auto trial = adjacency;
            trial[u].erase(trial[u].begin() + static_cast<std::ptrdiff_t>(i));
            GeosocialGraph candidate(trial, g.coords());
            if (first_divergence(candidate, fanout, {query}, fault)) {
                adjacency = std::move(trial);
                current = std::move(candidate);
            } else {
                ++i;
            }
        }
    }
    return current;
}

std::vector<std::filesystem::path> write_repro(const std::filesystem::path& prefix,
                                               const GeosocialGraph& g, std::size_t fanout,
                                               const std::optional<Divergence>& d,
                                               const std::string& failure) {
    std::filesystem::path edges = prefix;
    edges += ".edges.txt";
    std::filesystem::path coords = prefix;
    coords += ".coords.txt";
    std::filesystem::path query = prefix;
    query += ".query.txt";
    write_graph(g, edges, coords);
    std::ofstream out(query);
    if (!out) throw InputError("cannot write " + query.string());
    out << "# " << failure << "\n# fanout " << fanout << '\n';
    if (d) {
        out << "# vertex min_x min_y max_x max_y expected standard comp pointer\n"
            << d->query.vertex << ' ' << detail::format_double(d->query.rect.min_x) << ' '
            << detail::format_double(d->query.rect.min_y) << ' '
            << detail::format_double(d->query.rect.max_x) << ' '
            << detail::format_double(d->query.rect.max_y) << ' ' << d->expected << ' '
            << d->standard << ' ' << d->compressed << ' ' << d->pointer << '\n';
    }
    return {edges, coords, query};
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport report;
    std::mt19937_64 rng(opt.seed);

    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
        TrialCase tc = make_trial(opt, trial, rng);
        const bool fault = opt.inject_fault && trial == 0;
        auto queries = random_queries(tc.graph, opt.queries_per_trial, rng);
        ++report.trials_run;
        (tc.lbsn ? report.lbsn_trials : report.general_trials) += 1;

        std::optional<std::string> violation;
        for (auto mode : {CondenseMode::Full, CondenseMode::SocialOnly}) {
            if (!violation) violation = check_condensation(tc.graph, condense(tc.graph, mode));
        }
        if (!violation) {
            const auto compressed = ReachIndex::build(tc.graph, Variant::Compressed, tc.fanout);
            const auto pointer = ReachIndex::build(tc.graph, Variant::Pointer, tc.fanout);
            violation = check_index(tc.graph, ReachIndex::build(tc.graph, Variant::Standard, tc.fanout));
            if (!violation) violation = check_index(tc.graph, compressed);
            if (!violation) violation = check_index(tc.graph, pointer);
            if (!violation) violation = check_pointer_resolution(compressed, pointer);
        }

        std::optional<Divergence> divergence;
        GeosocialGraph failing = tc.graph;
        if (!violation) {
            divergence = first_divergence(tc.graph, tc.fanout, queries, fault);
            if (divergence) failing = minimise(tc.graph, tc.fanout, divergence->query, fault);
        }
        report.queries_checked += queries.size();

        if (violation || divergence) {
            report.passed = false;
            std::ostringstream msg;
            msg << "trial " << trial << " (" << (tc.lbsn ? "lbsn" : "general") << ", n = "
                << tc.graph.vertex_count() << ", m = " << tc.graph.edge_count() << ", fanout "
                << tc.fanout << "): ";
            if (violation) {
                msg << "invariant violated: " << *violation;
            } else {
                msg << "answers diverge on " << describe(divergence->query) << " oracle="
                    << divergence->expected << " standard=" << divergence->standard
                    << " comp=" << divergence->compressed << " pointer=" << divergence->pointer
                    << " (minimised to m = " << failing.edge_count() << ")";
            }
            report.failure = msg.str();
            if (opt.repro_prefix) {
                report.repro_files = write_repro(*opt.repro_prefix, failing, tc.fanout, divergence,
                                                 report.failure);
            }
            return report;
        }
    }
    return report;
}

}  // namespace rangereach
