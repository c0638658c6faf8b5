#include "rangereach/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rangereach/rtree.hpp"
#include "text_util.hpp"

namespace rangereach {

std::string to_string(WorkloadKind kind) {
    switch (kind) {
        case WorkloadKind::RegionExtent: return "region-extent";
        case WorkloadKind::VertexDegree: return "vertex-degree";
        case WorkloadKind::SpatialSelectivity: return "selectivity";
    }
    return "unknown";
}

WorkloadKind parse_workload_kind(const std::string& name) {
    std::string s = name;
    std::replace(s.begin(), s.end(), '_', '-');
    if (s == "region-extent" || s == "extent") return WorkloadKind::RegionExtent;
    if (s == "vertex-degree" || s == "degree") return WorkloadKind::VertexDegree;
    if (s == "selectivity" || s == "spatial-selectivity") return WorkloadKind::SpatialSelectivity;
    throw InputError("unknown workload kind '" + name + "'");
}

std::string DegreeBucket::to_string() const {
    return std::to_string(lo) + "-" + (hi ? std::to_string(*hi) : std::string());
}

DegreeBucket DegreeBucket::parse(const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) throw InputError("degree bucket must look like LO-HI or LO-");
    auto lo = detail::parse_u64(std::string_view(text).substr(0, dash));
    auto rest = std::string_view(text).substr(dash + 1);
    if (!lo) throw InputError("bad degree bucket '" + text + "'");
    DegreeBucket b;
    b.lo = *lo;
    if (rest.empty()) {
        b.hi.reset();
    } else {
        auto hi = detail::parse_u64(rest);
        if (!hi || *hi < *lo) throw InputError("bad degree bucket '" + text + "'");
        b.hi = *hi;
    }
    return b;
}

std::optional<std::string> QueryWorkload::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::optional<GraphFingerprint> QueryWorkload::fingerprint() const {
    auto text = meta_value("fingerprint");
    if (!text) return std::nullopt;
    return parse_fingerprint(*text);
}

std::string format_fingerprint(const GraphFingerprint& f) {
    std::ostringstream os;
    os << f.vertex_count << ':' << f.edge_count << ':' << f.spatial_count << ':' << std::hex
       << f.edge_hash;
    return os.str();
}

std::optional<GraphFingerprint> parse_fingerprint(const std::string& text) {
    auto parts = detail::split_char(text, ':');
    if (parts.size() != 4) return std::nullopt;
    auto n = detail::parse_u64(parts[0]);
    auto m = detail::parse_u64(parts[1]);
    auto p = detail::parse_u64(parts[2]);
    std::uint64_t hash = 0;
    auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), hash, 16);
    if (!n || !m || !p || ec != std::errc{} || ptr != parts[3].data() + parts[3].size()) {
        return std::nullopt;
    }
    return GraphFingerprint{*n, *m, *p, hash};
}

namespace {

/// Rectangle of the bounding box's aspect ratio covering `ratio` of its area,
/// centred on `c` and shifted (not shrunk) to fit inside `box`.
Rect2D extent_rect(const Rect2D& box, const Point2D& c, double ratio) {
    if (ratio >= 1.0) return box;  // min + (max - min) can round below max
    const double scale = std::sqrt(ratio);
    const double w = box.width() * scale;
    const double h = box.height() * scale;
    Rect2D r;
    r.min_x = std::clamp(c.x - w / 2.0, box.min_x, box.max_x - w);
    r.min_y = std::clamp(c.y - h / 2.0, box.min_y, box.max_y - h);
    r.max_x = std::min(r.min_x + w, box.max_x);
    r.max_y = std::min(r.min_y + h, box.max_y);
    return r;
}

/// Rectangle with half-extents `s` times the box size around `c`, clipped to the box.
Rect2D scaled_rect(const Rect2D& box, const Point2D& c, double s) {
    Rect2D r;
    r.min_x = std::max(box.min_x, c.x - s * box.width());
    r.max_x = std::min(box.max_x, c.x + s * box.width());
    r.min_y = std::max(box.min_y, c.y - s * box.height());
    r.max_y = std::min(box.max_y, c.y + s * box.height());
    return r;
}

std::string format_ratio(double v) { return detail::format_double(v); }

}  // namespace

QueryWorkload generate_workload(const GeosocialGraph& g, const WorkloadSpec& spec) {
    if (g.spatial_count() == 0) throw InputError("workload generation needs at least one spatial vertex");
    if (spec.kind != WorkloadKind::VertexDegree && !(spec.value > 0.0 && spec.value <= 1.0)) {
        throw InputError("workload ratio must lie in (0, 1]");
    }

    auto eligible = [&](VertexId v) { return !spec.users_only || !g.is_spatial(v); };
    std::vector<VertexId> pool;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (eligible(v) && spec.bucket.contains(g.out_degree(v))) pool.push_back(v);
    }
    std::string vertex_pool = "bucket";
    if (pool.empty()) {
        if (spec.kind == WorkloadKind::VertexDegree) {
            throw InputError("no vertex has out-degree in " + spec.bucket.to_string());
        }
        vertex_pool = "all";
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (eligible(v)) pool.push_back(v);
        }
        if (pool.empty()) throw InputError("no eligible query vertex");
    }

    const Rect2D box = g.spatial_bounds();
    const auto spatial = g.spatial_ids();
    const double n = static_cast<double>(g.vertex_count());

    std::size_t count_lo = 0;
    std::size_t count_hi = 0;
    RTree2D all_points;
    if (spec.kind == WorkloadKind::SpatialSelectivity) {
        const double target = spec.value * n;
        count_lo = static_cast<std::size_t>(std::ceil(target * (1.0 - kSelectivityTolerance) - 1e-9));
        count_hi = static_cast<std::size_t>(std::floor(target * (1.0 + kSelectivityTolerance) + 1e-9));
        count_lo = std::max<std::size_t>(count_lo, 1);
        if (count_lo > count_hi || count_lo > g.spatial_count()) {
            throw InputError("spatial selectivity " + format_ratio(spec.value) +
                             " is unattainable on this graph");
        }
        std::vector<RTree2D::Entry> entries;
        entries.reserve(spatial.size());
        for (VertexId v : spatial) entries.push_back({*g.coord(v), v});
        all_points = RTree2D::bulk_build(std::move(entries));
    }

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> pick_vertex(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_center(0, spatial.size() - 1);
    const double extent = spec.kind == WorkloadKind::RegionExtent ? spec.value : kDefaultRegionExtent;

    QueryWorkload w;
    w.queries.reserve(spec.query_count);
    for (std::size_t i = 0; i < spec.query_count; ++i) {
        const VertexId q = pool[pick_vertex(rng)];
        if (spec.kind != WorkloadKind::SpatialSelectivity) {
            const Point2D c = *g.coord(spatial[pick_center(rng)]);
            w.queries.push_back({q, extent_rect(box, c, extent)});
            continue;
        }

        constexpr int kMaxCenters = 1000;
        std::optional<Rect2D> found;
        for (int attempt = 0; attempt < kMaxCenters && !found; ++attempt) {
            const Point2D c = *g.coord(spatial[pick_center(rng)]);
            double lo = 0.0;
            double hi = 1.0;  // half-extent equal to the box size covers it from any centre
            for (int step = 0; step < 64; ++step) {
                const double mid = (lo + hi) / 2.0;
                const Rect2D r = step == 0 ? scaled_rect(box, c, 0.0) : scaled_rect(box, c, mid);
                const std::size_t k = all_points.count_in(r);
                if (k >= count_lo && k <= count_hi) {
                    found = r;
                    break;
                }
                if (step == 0) {
                    if (k > count_hi) break;  // too many points on the centre itself
                    continue;
                }
                if (k < count_lo) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        if (!found) {
            throw InputError("could not calibrate a rectangle to selectivity " + format_ratio(spec.value));
        }
        w.queries.push_back({q, *found});
    }

    w.meta = {
        {"kind", to_string(spec.kind)},
        {"value", spec.kind == WorkloadKind::VertexDegree ? spec.bucket.to_string() : format_ratio(spec.value)},
        {"extent", format_ratio(extent)},
        {"bucket", spec.bucket.to_string()},
        {"count", std::to_string(spec.query_count)},
        {"seed", std::to_string(spec.seed)},
        {"users_only", spec.users_only ? "1" : "0"},
        {"vertex_pool", vertex_pool},
        {"placement", spec.kind == WorkloadKind::SpatialSelectivity ? "vertex-centered-clipped"
                                                                     : "vertex-centered-shifted"},
        {"fingerprint", format_fingerprint(g.fingerprint())},
    };
    if (spec.kind == WorkloadKind::SpatialSelectivity) {
        w.meta.emplace_back("tolerance", format_ratio(kSelectivityTolerance));
    }
    return w;
}

void save_workload(const QueryWorkload& w, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << "#meta";
    for (const auto& [k, v] : w.meta) out << ' ' << k << '=' << v;
    out << "\nqid,vertex,min_x,min_y,max_x,max_y\n";
    for (std::size_t i = 0; i < w.queries.size(); ++i) {
        const Query& q = w.queries[i];
        out << i << ',' << q.vertex << ',' << detail::format_double(q.rect.min_x) << ','
            << detail::format_double(q.rect.min_y) << ',' << detail::format_double(q.rect.max_x)
            << ',' << detail::format_double(q.rect.max_y) << '\n';
    }
    if (!out) throw InputError("write error on " + path.string());
}

QueryWorkload load_workload(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    auto fail = [&](std::size_t line_no, const std::string& what) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };

    QueryWorkload w;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = detail::trim(line);
        if (body.empty()) continue;
        if (body.starts_with("#meta")) {
            for (auto token : detail::split_ws(body.substr(5))) {
                const auto eq = token.find('=');
                if (eq == std::string_view::npos) fail(line_no, "meta field without '='");
                w.meta.emplace_back(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
            }
            continue;
        }
        if (body.front() == '#') continue;
        if (!header_seen) {
            if (body != "qid,vertex,min_x,min_y,max_x,max_y") fail(line_no, "missing CSV header");
            header_seen = true;
            continue;
        }
        auto fields = detail::split_char(body, ',');
        if (fields.size() != 6) fail(line_no, "expected 6 comma-separated fields");
        auto qid = detail::parse_u64(detail::trim(fields[0]));
        auto vertex = detail::parse_u64(detail::trim(fields[1]));
        if (!qid || !vertex || *vertex >= kInvalidVertex) fail(line_no, "bad qid or vertex");
        double bounds[4];
        for (int k = 0; k < 4; ++k) {
            auto v = detail::parse_double(detail::trim(fields[2 + k]));
            if (!v) fail(line_no, "bad coordinate");
            bounds[k] = *v;
        }
        Rect2D r{bounds[0], bounds[1], bounds[2], bounds[3]};
        if (!r.valid()) fail(line_no, "invalid rectangle");
        w.queries.push_back({static_cast<VertexId>(*vertex), r});
    }
    if (!header_seen) throw InputError(path.string() + ": missing CSV header");
    return w;
}

}  // namespace rangereach
