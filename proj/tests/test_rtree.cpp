#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rangereach/rtree.hpp"

using namespace rangereach;

namespace {

std::vector<RTree2D::Entry> random_points(std::size_t n, std::mt19937_64& rng, double grid = 0) {
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<RTree2D::Entry> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = u(rng), y = u(rng);
        if (grid > 0) {
            x = std::floor(x / grid) * grid;
            y = std::floor(y / grid) * grid;
        }
        pts[i] = {{x, y}, static_cast<VertexId>(i)};
    }
    return pts;
}

Rect2D random_rect(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 110.0);
    std::uniform_real_distribution<double> side(0.0, 30.0);
    const double x = u(rng), y = u(rng);
    return {x, y, x + side(rng), y + side(rng)};
}

std::size_t scan_count(const std::vector<RTree2D::Entry>& pts, const Rect2D& r) {
    return static_cast<std::size_t>(
        std::count_if(pts.begin(), pts.end(), [&](const auto& e) { return r.contains(e.point); }));
}

}  // namespace

TEST_CASE("empty tree") {
    const auto t = RTree2D::bulk_build({});
    CHECK(t.empty());
    CHECK(t.size() == 0);
    CHECK(t.height() == 0);
    CHECK_FALSE(t.intersects({-1e9, -1e9, 1e9, 1e9}));
    CHECK(t.count_in({-1e9, -1e9, 1e9, 1e9}) == 0);
    CHECK(t.memory_footprint() == RTree2D::kHeaderBytes);
    CHECK_FALSE(t.root_box().has_value());
    CHECK_FALSE(check_invariants(t));
}

TEST_CASE("single point") {
    const auto t = RTree2D::bulk_build({{{1, 1}, 5}});
    CHECK(t.size() == 1);
    CHECK(t.height() == 1);
    REQUIRE(t.root_box());
    CHECK(*t.root_box() == Rect2D::degenerate({1, 1}));
    CHECK(t.memory_footprint() == RTree2D::kHeaderBytes + RTree2D::kNodeBytes + RTree2D::kEntryBytes);
    CHECK(t.intersects(Rect2D::degenerate({1, 1})));
    CHECK_FALSE(t.intersects({1.0000001, 0, 2, 2}));
}

TEST_CASE("four toy-graph venues") {
    // f g h i, with h at (3,3)
    const std::vector<RTree2D::Entry> pts{{{1, 1}, 5}, {{1.5, 2.5}, 6}, {{3, 3}, 7}, {{4, 3}, 8}};
    const Rect2D r{2.5, 2.5, 3.5, 3.5};
    CHECK(scan_count(pts, r) == 1);
    for (std::size_t m : {2, 3, 4, 16}) {
        const auto t = RTree2D::bulk_build(pts, m);
        CHECK(t.intersects(r));
        CHECK(t.count_in(r) == 1);
        CHECK(t.ids() == std::vector<VertexId>{5, 6, 7, 8});
    }
}

TEST_CASE("fanout below 2 is rejected") {
    CHECK_THROWS_AS(RTree2D::bulk_build({{{0, 0}, 0}}, 1), InputError);
    CHECK_THROWS_AS(RTree2D::bulk_build({{{0, 0}, 0}}, 0), InputError);
    CHECK_THROWS_AS(RTree2D::bulk_build({{{NAN, 0}, 0}}), InputError);
}

TEST_CASE("closed boundaries") {
    const auto t = RTree2D::bulk_build({{{2, 2}, 0}});
    CHECK(t.intersects({2, 0, 3, 1.999999}) == false);
    CHECK(t.intersects({0, 0, 2, 2}));
    CHECK(t.intersects({2, 2, 5, 5}));
}

TEST_CASE("10k random points agree with a linear scan") {
    std::mt19937_64 rng(11);
    const auto pts = random_points(10000, rng);
    const auto t = RTree2D::bulk_build(pts, 16);
    CHECK_FALSE(check_invariants(t));
    CHECK(t.size() == pts.size());
    const double bound = std::ceil(std::log(10000.0) / std::log(8.0)) + 1;
    CHECK(static_cast<double>(t.height()) <= bound);
    for (int q = 0; q < 1000; ++q) {
        const Rect2D r = random_rect(rng);
        const std::size_t expected = scan_count(pts, r);
        CHECK(t.count_in(r) == expected);
        CHECK(t.intersects(r) == (expected > 0));
    }
    CHECK(t.count_in({0, 0, 100, 100}) == t.size());
}

TEST_CASE("all fanouts and sizes satisfy the invariants") {
    std::mt19937_64 rng(3);
    for (std::size_t m : {2, 3, 4, 5, 8, 16, 64}) {
        for (std::size_t n : {1, 2, 3, 7, 16, 17, 33, 100, 257, 1000}) {
            const auto pts = random_points(n, rng, n % 2 ? 10.0 : 0.0);
            const auto t = RTree2D::bulk_build(pts, m);
            const auto problem = check_invariants(t);
            CHECK_MESSAGE(!problem, "M=" << m << " n=" << n << ": " << problem.value_or(""));
            const double base = static_cast<double>((m + 1) / 2);
            if (n > 1) {
                CHECK(static_cast<double>(t.height()) <=
                      std::ceil(std::log(static_cast<double>(n)) / std::log(base)) + 1);
            }
            for (int q = 0; q < 20; ++q) {
                const Rect2D r = random_rect(rng);
                CHECK(t.count_in(r) == scan_count(pts, r));
            }
        }
    }
}

TEST_CASE("duplicate points are stored individually") {
    std::vector<RTree2D::Entry> pts;
    for (VertexId i = 0; i < 50; ++i) pts.push_back({{1, 1}, i});
    const auto t = RTree2D::bulk_build(pts, 4);
    CHECK_FALSE(check_invariants(t));
    CHECK(t.count_in(Rect2D::degenerate({1, 1})) == 50);
}

TEST_CASE("answers do not depend on input order") {
    std::mt19937_64 rng(5);
    auto pts = random_points(500, rng, 5.0);
    const auto t1 = RTree2D::bulk_build(pts, 8);
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto t2 = RTree2D::bulk_build(pts, 8);
    for (int q = 0; q < 300; ++q) {
        const Rect2D r = random_rect(rng);
        CHECK(t1.count_in(r) == t2.count_in(r));
        CHECK(t1.intersects(r) == t2.intersects(r));
    }
    CHECK(t1.memory_footprint() == t2.memory_footprint());
}

TEST_CASE("footprint is deterministic and follows the formula") {
    std::mt19937_64 rng(8);
    const auto pts = random_points(777, rng);
    const auto a = RTree2D::bulk_build(pts, 16);
    const auto b = RTree2D::bulk_build(pts, 16);
    CHECK(a.memory_footprint() == b.memory_footprint());
    std::size_t nodes = 0;
    for (const auto& level : a.levels()) nodes += level.size();
    CHECK(a.memory_footprint() == RTree2D::kHeaderBytes + nodes * RTree2D::kNodeBytes + 777 * RTree2D::kEntryBytes);
}

TEST_CASE("serialize round trip and corruption") {
    std::mt19937_64 rng(2);
    const auto pts = random_points(300, rng);
    const auto t = RTree2D::bulk_build(pts, 6);
    std::stringstream buf;
    ByteWriter w(buf);
    t.serialize(w);
    const std::string bytes = buf.str();
    std::istringstream in(bytes);
    ByteReader r(in);
    const auto back = RTree2D::deserialize(r);
    CHECK(back.entries().size() == t.entries().size());
    CHECK(std::equal(back.entries().begin(), back.entries().end(), t.entries().begin()));
    for (int q = 0; q < 100; ++q) {
        const Rect2D rr = random_rect(rng);
        CHECK(back.count_in(rr) == t.count_in(rr));
    }
    std::istringstream half(bytes.substr(0, bytes.size() / 2));
    ByteReader rt(half);
    CHECK_THROWS_AS(RTree2D::deserialize(rt), FormatError);
}
