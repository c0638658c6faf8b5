#pragma once

#include "rangereach/geometry.hpp"
#include "rangereach/graph.hpp"

namespace rangereach {

/// One RangeReach question: can `vertex` reach a spatial vertex inside `rect`?
struct Query {
    VertexId vertex = 0;
    Rect2D rect;

    friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace rangereach
