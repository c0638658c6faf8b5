#pragma once

// Helpers shared by the test binaries. Nothing here calls the code under
// test to produce expected values.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rangereach/graph.hpp"

namespace rangereach::testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(RANGEREACH_TEST_DATA) / name;
}

// a..i
enum Toy : VertexId { A, B, C, D, E, F, G, H, I };

inline GeosocialGraph toy_graph() {
    return load_graph(data_path("toy.edges"), data_path("toy.coords"));
}

// R: holds h and i, not f or g.
inline constexpr double kToyR[4] = {2.0, 1.0, 4.5, 3.5};
// holds only f
inline constexpr double kToyOnlyF[4] = {0.5, 0.5, 1.2, 1.2};

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("rangereach-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Random digraph with edge probability `density`, built directly from
/// adjacency lists. Roughly `spatial_share` of the vertices get a location.
inline GeosocialGraph random_digraph(std::size_t n, double density, double spatial_share,
                                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<VertexId>> adj(n);
    std::vector<std::optional<Point2D>> coords(n);
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = 0; b < n; ++b) {
            if (a != b && u(rng) < density) adj[a].push_back(b);
        }
        if (u(rng) < spatial_share) coords[a] = Point2D{u(rng), u(rng)};
    }
    return GeosocialGraph(adj, std::move(coords));
}

/// Plain reachability closure by repeated DFS over adjacency lists.
inline std::vector<std::vector<bool>> closure(const GeosocialGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (VertexId s = 0; s < n; ++s) {
        std::vector<VertexId> stack{s};
        reach[s][s] = true;
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            for (VertexId v : g.out_neighbors(u)) {
                if (!reach[s][v]) {
                    reach[s][v] = true;
                    stack.push_back(v);
                }
            }
        }
    }
    return reach;
}

}  // namespace rangereach::testing
