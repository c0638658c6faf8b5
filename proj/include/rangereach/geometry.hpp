#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "rangereach/error.hpp"

namespace rangereach {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

/// Axis-aligned rectangle. Containment is closed on all four sides.
struct Rect2D {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    /// Validating constructor; throws InputError on non-finite or inverted bounds.
    static Rect2D make(double min_x, double min_y, double max_x, double max_y) {
        Rect2D r{min_x, min_y, max_x, max_y};
        if (!r.valid()) {
            throw InputError("invalid rectangle: bounds must be finite with min <= max");
        }
        return r;
    }

    static Rect2D degenerate(const Point2D& p) noexcept { return {p.x, p.y, p.x, p.y}; }

    /// Identity for expand(): contains nothing and expanding it by a point yields that point.
    static Rect2D empty_bounds() noexcept {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return {inf, inf, -inf, -inf};
    }

    [[nodiscard]] bool valid() const noexcept {
        return std::isfinite(min_x) && std::isfinite(min_y) && std::isfinite(max_x) &&
               std::isfinite(max_y) && min_x <= max_x && min_y <= max_y;
    }

    [[nodiscard]] bool contains(const Point2D& p) const noexcept {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }

    [[nodiscard]] bool contains(const Rect2D& r) const noexcept {
        return r.min_x >= min_x && r.max_x <= max_x && r.min_y >= min_y && r.max_y <= max_y;
    }

    [[nodiscard]] bool intersects(const Rect2D& r) const noexcept {
        return r.min_x <= max_x && r.max_x >= min_x && r.min_y <= max_y && r.max_y >= min_y;
    }

    void expand(const Point2D& p) noexcept {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }

    void expand(const Rect2D& r) noexcept {
        min_x = std::min(min_x, r.min_x);
        min_y = std::min(min_y, r.min_y);
        max_x = std::max(max_x, r.max_x);
        max_y = std::max(max_y, r.max_y);
    }

    [[nodiscard]] double width() const noexcept { return max_x - min_x; }
    [[nodiscard]] double height() const noexcept { return max_y - min_y; }
    [[nodiscard]] double area() const noexcept { return width() * height(); }
    [[nodiscard]] Point2D center() const noexcept {
        return {min_x + width() / 2.0, min_y + height() / 2.0};
    }

    friend bool operator==(const Rect2D&, const Rect2D&) = default;
};

}  // namespace rangereach
