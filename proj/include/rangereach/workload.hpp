#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rangereach/graph.hpp"
#include "rangereach/query.hpp"

namespace rangereach {

enum class WorkloadKind : std::uint8_t { RegionExtent, VertexDegree, SpatialSelectivity };

std::string to_string(WorkloadKind kind);
/// Accepts region-extent, vertex-degree, selectivity (underscores also accepted).
WorkloadKind parse_workload_kind(const std::string& name);

/// Inclusive out-degree range; `hi` empty means unbounded.
struct DegreeBucket {
    std::size_t lo = 100;
    std::optional<std::size_t> hi = 149;

    [[nodiscard]] bool contains(std::size_t degree) const noexcept {
        return degree >= lo && (!hi || degree <= *hi);
    }
    /// "100-149" or "200-".
    [[nodiscard]] std::string to_string() const;
    static DegreeBucket parse(const std::string& text);

    friend bool operator==(const DegreeBucket&, const DegreeBucket&) = default;
};

inline constexpr double kDefaultRegionExtent = 0.05;
inline constexpr std::size_t kDefaultQueryCount = 1000;
/// Relative tolerance on the achieved spatial selectivity.
inline constexpr double kSelectivityTolerance = 0.10;

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::RegionExtent;
    /// Region extent ratio or spatial selectivity ratio, in (0, 1]. Unused for VertexDegree.
    double value = kDefaultRegionExtent;
    /// Query-vertex bucket. For the other kinds it is a preference: when no
    /// vertex falls in it the generator falls back to all vertices.
    DegreeBucket bucket;
    std::size_t query_count = kDefaultQueryCount;
    std::uint64_t seed = 0;
    bool users_only = false;  // draw query vertices from non-spatial vertices only
};

struct QueryWorkload {
    std::vector<Query> queries;
    /// Ordered key/value pairs written to the `#meta` line.
    std::vector<std::pair<std::string, std::string>> meta;

    [[nodiscard]] std::optional<std::string> meta_value(const std::string& key) const;
    /// Fingerprint of the graph the workload was generated on, when recorded.
    [[nodiscard]] std::optional<GraphFingerprint> fingerprint() const;

    friend bool operator==(const QueryWorkload&, const QueryWorkload&) = default;
};

/// Rectangles keep the aspect ratio of the spatial bounding box and are
/// placed around the location of a uniformly chosen spatial vertex.
/// RegionExtent/VertexDegree rectangles are shifted to lie inside the box;
/// selectivity rectangles are grown by bisection and clipped to it.
/// Deterministic for a fixed (graph, spec).
QueryWorkload generate_workload(const GeosocialGraph& g, const WorkloadSpec& spec);

/// CSV: `#meta k=v ...` line, header `qid,vertex,min_x,min_y,max_x,max_y`, one row per query.
void save_workload(const QueryWorkload& w, const std::filesystem::path& path);
QueryWorkload load_workload(const std::filesystem::path& path);

std::string format_fingerprint(const GraphFingerprint& f);
std::optional<GraphFingerprint> parse_fingerprint(const std::string& text);

}  // namespace rangereach
