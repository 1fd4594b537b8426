// raster.hpp — pixel-center triangle coverage with a tie-breaking fill
// rule, so that pixels on a shared edge belong to exactly one triangle.
#pragma once

#include <algorithm>
#include <cmath>

#include "omage/core.hpp"

namespace omage {

// A pixel center exactly on an edge counts as covered only when the
// directed edge (after winding normalization) points toward smaller y,
// or is horizontal and points toward larger x. Opposite traversals of a
// shared edge get opposite answers, which makes adjacency watertight.
inline bool edge_accepts_zero(Vec2 from, Vec2 to) {
    double dy = to.y - from.y;
    double dx = to.x - from.x;
    return dy < 0 || (dy == 0 && dx > 0);
}

// Edge function evaluated in a canonical per-undirected-edge order, so
// the two traversal directions of a shared edge produce exactly opposite
// values and adjacent triangles cannot both claim (or both reject) a
// near-tie pixel.
inline double edge_w(Vec2 from, Vec2 to, Vec2 p) {
    bool flip = to.x < from.x || (to.x == from.x && to.y < from.y);
    return flip ? -cross2(to, from, p) : cross2(from, to, p);
}

struct RasterTriangle {
    Vec2 a, b, c;  // pixel coordinates; winding normalized in init()
    double area2 = 0;
    bool swapped = false;  // true if init() exchanged b and c

    // Returns false for zero-area triangles, which cover nothing.
    bool init() {
        area2 = cross2(a, b, c);
        if (area2 == 0) return false;
        if (area2 < 0) {
            std::swap(b, c);
            area2 = -area2;
            swapped = true;
        }
        return true;
    }

    bool covers(Vec2 p) const {
        double w0 = edge_w(b, c, p);
        double w1 = edge_w(c, a, p);
        double w2 = edge_w(a, b, p);
        if (w0 < 0 || w1 < 0 || w2 < 0) return false;
        if (w0 == 0 && !edge_accepts_zero(b, c)) return false;
        if (w1 == 0 && !edge_accepts_zero(c, a)) return false;
        if (w2 == 0 && !edge_accepts_zero(a, b)) return false;
        return true;
    }

    // Barycentric weights of p in the ORIGINAL vertex order passed to
    // the constructor (accounting for any winding swap).
    void barycentric(Vec2 p, double& w0, double& w1, double& w2) const {
        double wa = cross2(b, c, p) / area2;
        double wb = cross2(c, a, p) / area2;
        double wc = cross2(a, b, p) / area2;
        w0 = wa;
        w1 = swapped ? wc : wb;
        w2 = swapped ? wb : wc;
    }
};

// Calls fn(i, j) for every raster pixel whose center (j+0.5, i+0.5)
// is covered. Iteration is limited to the triangle's bounding box
// clamped to [0,width) x [0,height).
template <typename Fn>
void rasterize_triangle(Vec2 a, Vec2 b, Vec2 c, int width, int height, Fn&& fn) {
    RasterTriangle tri{a, b, c};
    if (!tri.init()) return;
    double min_x = std::min({a.x, b.x, c.x});
    double max_x = std::max({a.x, b.x, c.x});
    double min_y = std::min({a.y, b.y, c.y});
    double max_y = std::max({a.y, b.y, c.y});
    int j0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    int j1 = std::min(width - 1, static_cast<int>(std::ceil(max_x - 0.5)));
    int i0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    int i1 = std::min(height - 1, static_cast<int>(std::ceil(max_y - 0.5)));
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            Vec2 p{j + 0.5, i + 0.5};
            if (tri.covers(p)) fn(i, j);
        }
    }
}

}  // namespace omage
