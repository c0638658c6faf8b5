#include "rangereach/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

#include "text_util.hpp"

namespace rangereach {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (8 * i)) & 0xffU;
        h *= kFnvPrime;
    }
}

}  // namespace

GeosocialGraph::GeosocialGraph(const std::vector<std::vector<VertexId>>& adjacency,
                               std::vector<std::optional<Point2D>> coords)
    : coords_(std::move(coords)) {
    const std::size_t n = coords_.size();
    if (adjacency.size() != n) {
        throw InputError("adjacency and coordinate tables disagree on the vertex count");
    }
    if (n >= kInvalidVertex) {
        throw InputError("graph too large for 32-bit vertex ids");
    }

    offsets_.assign(n + 1, 0);
    std::vector<VertexId> stamp(n, kInvalidVertex);
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v : adjacency[u]) {
            if (v >= n) {
                throw InputError("edge endpoint " + std::to_string(v) + " out of range");
            }
            if (v == u) {
                ++dropped_self_loops_;
                continue;
            }
            if (stamp[v] == u) {
                ++dropped_duplicate_edges_;
                continue;
            }
            stamp[v] = u;
            targets_.push_back(v);
        }
        offsets_[u + 1] = targets_.size();
    }

    for (VertexId v = 0; v < n; ++v) {
        if (!coords_[v]) continue;
        if (!coords_[v]->finite()) {
            throw InputError("vertex " + std::to_string(v) + " has a non-finite coordinate");
        }
        spatial_ids_.push_back(v);
        bounds_.expand(*coords_[v]);
    }

    original_ids_.resize(n);
    std::iota(original_ids_.begin(), original_ids_.end(), std::uint64_t{0});
}

void GeosocialGraph::check_vertex(VertexId v) const {
    if (v >= vertex_count()) {
        throw std::out_of_range("vertex id " + std::to_string(v) + " out of range (n = " +
                                std::to_string(vertex_count()) + ")");
    }
}

std::span<const VertexId> GeosocialGraph::out_neighbors(VertexId v) const {
    check_vertex(v);
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t GeosocialGraph::out_degree(VertexId v) const {
    check_vertex(v);
    return offsets_[v + 1] - offsets_[v];
}

const std::optional<Point2D>& GeosocialGraph::coord(VertexId v) const {
    check_vertex(v);
    return coords_[v];
}

void GeosocialGraph::set_original_ids(std::vector<std::uint64_t> ids) {
    if (ids.size() != vertex_count()) {
        throw InputError("id remap table size does not match the vertex count");
    }
    original_ids_ = std::move(ids);
}

std::optional<VertexId> GeosocialGraph::dense_id(std::uint64_t original) const {
    // original_ids_ is increasing for loaded and generated graphs
    auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
    if (it != original_ids_.end() && *it == original) {
        return static_cast<VertexId>(it - original_ids_.begin());
    }
    for (std::size_t i = 0; i < original_ids_.size(); ++i) {
        if (original_ids_[i] == original) return static_cast<VertexId>(i);
    }
    return std::nullopt;
}

GraphFingerprint GeosocialGraph::fingerprint() const noexcept {
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, vertex_count());
    for (std::size_t u = 0; u < vertex_count(); ++u) {
        fnv_mix(h, offsets_[u + 1] - offsets_[u]);
        for (std::size_t i = offsets_[u]; i < offsets_[u + 1]; ++i) fnv_mix(h, targets_[i]);
    }
    return {vertex_count(), edge_count(), spatial_count(), h};
}

std::size_t out_degree(const GeosocialGraph& g, VertexId v) { return g.out_degree(v); }

// ---------------------------------------------------------------------------
// File ingestion

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
    throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

GeosocialGraph load_graph(const std::filesystem::path& edges_path,
                          const std::filesystem::path& coords_path, LoadReport* report) {
    LoadReport local;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    std::vector<std::pair<std::uint64_t, Point2D>> coord_rows;
    std::vector<std::uint64_t> lone;

    {
        auto in = open_input(edges_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto body = detail::trim(line);
            if (body.empty() || body.front() == '#') continue;
            auto fields = detail::split_ws(body);
            if (fields.size() == 1) {
                // a lone id declares a vertex without edges
                auto id = detail::parse_u64(fields[0]);
                if (!id) malformed(edges_path, line_no, "vertex ids must be nonnegative integers");
                lone.push_back(*id);
                continue;
            }
            if (fields.size() != 2) malformed(edges_path, line_no, "expected `src dst`");
            auto src = detail::parse_u64(fields[0]);
            auto dst = detail::parse_u64(fields[1]);
            if (!src || !dst) malformed(edges_path, line_no, "vertex ids must be nonnegative integers");
            edges.emplace_back(*src, *dst);
            ++local.edge_lines;
        }
        if (in.bad()) throw InputError("read error on " + edges_path.string());
    }
    {
        auto in = open_input(coords_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto body = detail::trim(line);
            if (body.empty() || body.front() == '#') continue;
            auto fields = detail::split_ws(body);
            if (fields.size() != 3) malformed(coords_path, line_no, "expected `id x y`");
            auto id = detail::parse_u64(fields[0]);
            auto x = detail::parse_double(fields[1]);
            auto y = detail::parse_double(fields[2]);
            if (!id || !x || !y) malformed(coords_path, line_no, "unparsable field");
            if (!std::isfinite(*x) || !std::isfinite(*y)) {
                malformed(coords_path, line_no, "non-finite coordinate");
            }
            coord_rows.emplace_back(*id, Point2D{*x, *y});
            ++local.coord_lines;
        }
        if (in.bad()) throw InputError("read error on " + coords_path.string());
    }

    std::vector<std::uint64_t> ids;
    ids.reserve(edges.size() * 2 + coord_rows.size());
    for (auto [s, d] : edges) {
        ids.push_back(s);
        ids.push_back(d);
    }
    for (const auto& row : coord_rows) ids.push_back(row.first);
    ids.insert(ids.end(), lone.begin(), lone.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() >= kInvalidVertex) throw InputError("too many vertices for 32-bit ids");

    auto dense = [&ids](std::uint64_t original) {
        return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), original) -
                                     ids.begin());
    };

    std::vector<std::vector<VertexId>> adjacency(ids.size());
    for (auto [s, d] : edges) adjacency[dense(s)].push_back(dense(d));

    std::vector<std::optional<Point2D>> coords(ids.size());
    for (const auto& [original, p] : coord_rows) {
        auto& slot = coords[dense(original)];
        if (slot) {
            if (*slot != p) {
                throw InputError(coords_path.string() + ": vertex " + std::to_string(original) +
                                 " has conflicting coordinates");
            }
            ++local.repeated_coords;
            continue;
        }
        slot = p;
    }

    GeosocialGraph g(adjacency, std::move(coords));
    g.set_original_ids(std::move(ids));
    local.dropped_self_loops = g.dropped_self_loops();
    local.dropped_duplicate_edges = g.dropped_duplicate_edges();
    if (report) *report = local;
    return g;
}

void write_graph(const GeosocialGraph& g, const std::filesystem::path& edges_path,
                 const std::filesystem::path& coords_path) {
    const auto ids = g.original_ids();
    {
        std::ofstream out(edges_path);
        if (!out) throw InputError("cannot write " + edges_path.string());
        out << "# src dst\n";
        for (VertexId u = 0; u < g.vertex_count(); ++u) {
            for (VertexId v : g.out_neighbors(u)) out << ids[u] << ' ' << ids[v] << '\n';
        }
        // vertices that neither the edges nor the coordinates would mention
        std::vector<std::uint8_t> seen(g.vertex_count(), 0);
        for (VertexId u = 0; u < g.vertex_count(); ++u) {
            if (g.out_degree(u) > 0 || g.is_spatial(u)) seen[u] = 1;
            for (VertexId v : g.out_neighbors(u)) seen[v] = 1;
        }
        for (VertexId u = 0; u < g.vertex_count(); ++u) {
            if (!seen[u]) out << ids[u] << '\n';
        }
        if (!out) throw InputError("write error on " + edges_path.string());
    }
    {
        std::ofstream out(coords_path);
        if (!out) throw InputError("cannot write " + coords_path.string());
        out << "# id x y\n";
        for (VertexId v : g.spatial_ids()) {
            const Point2D& p = *g.coord(v);
            out << ids[v] << ' ' << detail::format_double(p.x) << ' '
                << detail::format_double(p.y) << '\n';
        }
        if (!out) throw InputError("write error on " + coords_path.string());
    }
}

// ---------------------------------------------------------------------------
// Synthetic graphs

namespace {

/// Draws `count` distinct indices from [0, universe).
std::vector<std::uint64_t> sample_distinct(std::uint64_t count, std::uint64_t universe,
                                           std::mt19937_64& rng) {
    std::vector<std::uint64_t> out;
    if (count == 0) return out;
    out.reserve(count);
    if (count * 2 > universe) {
        // dense: partial Fisher-Yates over the whole universe
        std::vector<std::uint64_t> all(universe);
        std::iota(all.begin(), all.end(), std::uint64_t{0});
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uniform_int_distribution<std::uint64_t> pick(i, universe - 1);
            std::swap(all[i], all[pick(rng)]);
            out.push_back(all[i]);
        }
        return out;
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(count * 2);
    std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
    while (out.size() < count) {
        std::uint64_t k = pick(rng);
        if (seen.insert(k).second) out.push_back(k);
    }
    return out;
}

std::uint64_t edge_target(double count, std::uint64_t maximum, const char* what) {
    if (!(count >= 0.0) || !std::isfinite(count)) {
        throw InputError(std::string(what) + " density must be a nonnegative number");
    }
    auto k = static_cast<std::uint64_t>(std::llround(count));
    if (k > maximum) {
        throw InputError(std::string(what) + " density asks for " + std::to_string(k) +
                         " edges but at most " + std::to_string(maximum) + " are possible");
    }
    return k;
}

/// Maps k in [0, n*(n-1)) to an ordered pair without self-loop.
std::pair<std::uint64_t, std::uint64_t> offdiagonal_pair(std::uint64_t k, std::uint64_t n) {
    std::uint64_t src = k / (n - 1);
    std::uint64_t t = k % (n - 1);
    return {src, t >= src ? t + 1 : t};
}

}  // namespace

GeosocialGraph generate_graph(std::size_t n_users, std::size_t n_venues, double social_density,
                              double checkin_density, std::uint64_t seed) {
    const std::uint64_t nu = n_users;
    const std::uint64_t nv = n_venues;
    const std::uint64_t social_max = nu > 1 ? nu * (nu - 1) : 0;
    const std::uint64_t social_k =
        edge_target(static_cast<double>(nu) * social_density, social_max, "social");
    const std::uint64_t checkin_k =
        edge_target(static_cast<double>(nu) * checkin_density, nu * nv, "check-in");

    std::mt19937_64 rng(seed);
    const std::size_t n = n_users + n_venues;
    std::vector<std::optional<Point2D>> coords(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t v = n_users; v < n; ++v) {
        double x = unit(rng);
        double y = unit(rng);
        coords[v] = Point2D{x, y};
    }

    std::vector<std::vector<VertexId>> adjacency(n);
    for (std::uint64_t k : sample_distinct(social_k, social_max, rng)) {
        auto [s, d] = offdiagonal_pair(k, nu);
        adjacency[s].push_back(static_cast<VertexId>(d));
    }
    for (std::uint64_t k : sample_distinct(checkin_k, nu * nv, rng)) {
        adjacency[k / nv].push_back(static_cast<VertexId>(n_users + k % nv));
    }
    return GeosocialGraph(adjacency, std::move(coords));
}

GeosocialGraph generate_general_graph(std::size_t vertex_count, std::size_t edge_count,
                                      double spatial_fraction, std::uint64_t seed, unsigned grid) {
    if (!(spatial_fraction >= 0.0 && spatial_fraction <= 1.0)) {
        throw InputError("spatial fraction must lie in [0, 1]");
    }
    const std::uint64_t n = vertex_count;
    const std::uint64_t maximum = n > 1 ? n * (n - 1) : 0;
    if (edge_count > maximum) {
        throw InputError("requested " + std::to_string(edge_count) + " edges but at most " +
                         std::to_string(maximum) + " are possible");
    }

    std::mt19937_64 rng(seed);
    std::vector<VertexId> order(vertex_count);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto spatial = static_cast<std::size_t>(
        std::llround(spatial_fraction * static_cast<double>(vertex_count)));

    std::vector<std::optional<Point2D>> coords(vertex_count);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<unsigned> cell(0, grid);
    for (std::size_t i = 0; i < spatial; ++i) {
        if (grid > 0) {
            double x = static_cast<double>(cell(rng)) / grid;
            double y = static_cast<double>(cell(rng)) / grid;
            coords[order[i]] = Point2D{x, y};
        } else {
            double x = unit(rng);
            double y = unit(rng);
            coords[order[i]] = Point2D{x, y};
        }
    }

    std::vector<std::vector<VertexId>> adjacency(vertex_count);
    for (std::uint64_t k : sample_distinct(edge_count, maximum, rng)) {
        auto [s, d] = offdiagonal_pair(k, n);
        adjacency[s].push_back(static_cast<VertexId>(d));
    }
    return GeosocialGraph(adjacency, std::move(coords));
}

}  // namespace rangereach
