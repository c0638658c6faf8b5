#include "rangereach/scc.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace rangereach {

std::size_t Condensation::dag_edge_count() const noexcept {
    std::size_t e = 0;
    for (const auto& succ : dag_adjacency) e += succ.size();
    return e;
}

std::vector<std::size_t> Condensation::component_sizes() const {
    std::vector<std::size_t> sizes(comp_count, 0);
    for (ComponentId c : comp_of) {
        if (c != kNoComponent) ++sizes[c];
    }
    return sizes;
}

std::size_t Condensation::memory_bytes() const noexcept {
    std::size_t bytes = comp_of.size() * sizeof(ComponentId);
    bytes += (comp_count + 1) * sizeof(std::uint32_t) * 2;  // CSR offsets for DAG and members
    bytes += dag_edge_count() * sizeof(ComponentId);
    for (const auto& m : member_spatial) bytes += m.size() * sizeof(VertexId);
    return bytes;
}

bool is_spatial_sink(const GeosocialGraph& g, VertexId v) {
    return g.is_spatial(v) && g.out_degree(v) == 0;
}

std::vector<ComponentId> strongly_connected_components(const GeosocialGraph& g,
                                                       std::span<const std::uint8_t> include,
                                                       std::size_t& count) {
    const std::size_t n = g.vertex_count();
    constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

    std::vector<std::uint32_t> index(n, kUnvisited);
    std::vector<std::uint32_t> low(n, 0);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<VertexId> stack;
    std::vector<ComponentId> raw(n, kNoComponent);

    struct Frame {
        VertexId v;
        std::size_t next_edge;
    };
    std::vector<Frame> calls;

    std::uint32_t next_index = 0;
    ComponentId raw_count = 0;

    for (VertexId root = 0; root < n; ++root) {
        if (!include[root] || index[root] != kUnvisited) continue;

        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        calls.push_back({root, 0});

        while (!calls.empty()) {
            Frame& f = calls.back();
            const auto succ = g.out_neighbors(f.v);
            if (f.next_edge < succ.size()) {
                VertexId w = succ[f.next_edge++];
                if (!include[w]) continue;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    calls.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }

            const VertexId v = f.v;
            calls.pop_back();
            if (!calls.empty()) {
                VertexId parent = calls.back().v;
                low[parent] = std::min(low[parent], low[v]);
            }
            if (low[v] == index[v]) {
                VertexId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    raw[w] = raw_count;
                } while (w != v);
                ++raw_count;
            }
        }
    }

    // Renumber by smallest member: scanning vertices in id order meets each
    // component first at its smallest member.
    std::vector<ComponentId> relabel(raw_count, kNoComponent);
    ComponentId next = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (raw[v] == kNoComponent) continue;
        if (relabel[raw[v]] == kNoComponent) relabel[raw[v]] = next++;
        raw[v] = relabel[raw[v]];
    }
    count = next;
    return raw;
}

std::vector<ComponentId> topological_order(const Condensation& c) {
    std::vector<std::size_t> indegree(c.comp_count, 0);
    for (const auto& succ : c.dag_adjacency) {
        for (ComponentId s : succ) ++indegree[s];
    }
    std::priority_queue<ComponentId, std::vector<ComponentId>, std::greater<>> ready;
    for (ComponentId i = 0; i < c.comp_count; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    std::vector<ComponentId> order;
    order.reserve(c.comp_count);
    while (!ready.empty()) {
        ComponentId u = ready.top();
        ready.pop();
        order.push_back(u);
        for (ComponentId s : c.dag_adjacency[u]) {
            if (--indegree[s] == 0) ready.push(s);
        }
    }
    if (order.size() != c.comp_count) {
        throw Error("condensation graph contains a cycle");
    }
    return order;
}

Condensation condense(const GeosocialGraph& g, CondenseMode mode) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint8_t> include(n, 1);
    if (mode == CondenseMode::SocialOnly) {
        for (VertexId v : g.spatial_ids()) {
            if (g.out_degree(v) == 0) include[v] = 0;
        }
    }

    Condensation c;
    c.mode = mode;
    c.comp_of = strongly_connected_components(g, include, c.comp_count);
    c.dag_adjacency.resize(c.comp_count);
    c.member_spatial.resize(c.comp_count);

    for (VertexId u = 0; u < n; ++u) {
        const ComponentId cu = c.comp_of[u];
        if (cu == kNoComponent) continue;
        if (g.is_spatial(u)) c.member_spatial[cu].push_back(u);
        for (VertexId v : g.out_neighbors(u)) {
            const ComponentId cv = c.comp_of[v];
            if (cv == kNoComponent) {
                c.member_spatial[cu].push_back(v);  // spatial sink neighbour
            } else if (cv != cu) {
                c.dag_adjacency[cu].push_back(cv);
            }
        }
    }
    for (auto& succ : c.dag_adjacency) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    for (auto& members : c.member_spatial) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    }
    c.topo_order = topological_order(c);
    return c;
}

}  // namespace rangereach
