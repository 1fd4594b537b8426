// packer.hpp — shelf packing of island bounding boxes into [0,1]² with
// margins, under one global uniform scale found by bisection.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "omage/atlas.hpp"
#include "omage/core.hpp"

namespace omage {

// Per-island similarity: uv' = uv * scale + translate.
struct IslandTransform {
    int island_id = 0;
    double scale = 1;
    Vec2 translate{0, 0};

    Vec2 apply(Vec2 uv) const { return uv * scale + translate; }
};

namespace detail {

struct PackBox {
    int island_id;
    double min_u, min_v;  // original bbox corner
    double w, h;          // padded dims, original UV units
};

struct Placement {
    double x, y;  // scaled bbox min corner in [0,1]²
};

// Next-fit decreasing height: boxes are walked in sorted order and laid
// left-to-right; a box that does not fit the current row opens a new
// shelf below. Margin-sized gaps separate boxes from each other and
// from the domain border. Returns false if some box overflows [0,1]².
inline bool place_shelves(const std::vector<PackBox>& boxes, double s,
                          double m, std::vector<Placement>* out) {
    if (out) out->resize(boxes.size());
    double limit = 1 - m;
    double x = m, y = m, shelf_h = 0;
    for (size_t i = 0; i < boxes.size(); ++i) {
        double w = boxes[i].w * s;
        double h = boxes[i].h * s;
        if (x > m && x + w > limit) {
            y += shelf_h + m;
            x = m;
            shelf_h = 0;
        }
        if (x + w > limit || y + h > limit) return false;
        if (out) (*out)[i] = {x, y};
        x += w + m;
        shelf_h = std::max(shelf_h, h);
    }
    return true;
}

}  // namespace detail

// Packs island bboxes so that, after uv' = uv*scale + translate, all
// boxes lie inside [0,1]² and any two are separated by at least
// margin_px/target_res in both axes. One global scale preserves the
// islands' relative sizes; it is maximized by 32 bisection steps.
// Zero-width or zero-height bboxes are padded to 1e-6 UV units; a bbox
// degenerate in both axes is an error.
inline std::vector<IslandTransform> pack_aabb(const std::vector<UvIsland>& islands,
                                              int margin_px, int target_res) {
    if (islands.empty())
        throw Error(ErrorCode::InvalidConfig, "pack_aabb: no islands");
    if (margin_px < 0 || target_res < 4 * (margin_px + 1))
        throw Error(ErrorCode::InvalidConfig, "pack_aabb: bad margin/resolution");

    const double m = static_cast<double>(margin_px) / target_res;

    std::vector<detail::PackBox> boxes;
    boxes.reserve(islands.size());
    for (const UvIsland& isl : islands) {
        double w = isl.width(), h = isl.height();
        if (w <= 0 && h <= 0)
            throw Error(ErrorCode::UnpackableInput,
                        "island " + std::to_string(isl.island_id) +
                            " has a degenerate UV bbox");
        boxes.push_back({isl.island_id, isl.min_u, isl.min_v,
                         std::max(w, 1e-6), std::max(h, 1e-6)});
    }
    std::sort(boxes.begin(), boxes.end(),
              [](const detail::PackBox& a, const detail::PackBox& b) {
                  if (a.h != b.h) return a.h > b.h;
                  return a.island_id < b.island_id;
              });

    double max_dim = 0;
    for (const detail::PackBox& b : boxes)
        max_dim = std::max({max_dim, b.w, b.h});

    // Upper bound: the largest box spans the full usable width. Exact
    // for a single island, so that case is pure normalization.
    double hi = (1 - 2 * m) / max_dim;
    double s;
    if (detail::place_shelves(boxes, hi, m, nullptr)) {
        s = hi;
    } else {
        double lo = 0;
        for (int it = 0; it < 32; ++it) {
            double mid = 0.5 * (lo + hi);
            if (detail::place_shelves(boxes, mid, m, nullptr))
                lo = mid;
            else
                hi = mid;
        }
        if (lo <= 0)
            throw Error(ErrorCode::UnpackableInput,
                        "margins leave no room to pack");
        s = lo;
    }

    std::vector<detail::Placement> placed;
    detail::place_shelves(boxes, s, m, &placed);

    // Center the used extent inside the unit square; this keeps border
    // margins >= m and does not change pairwise separations.
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (size_t i = 0; i < boxes.size(); ++i) {
        x0 = std::min(x0, placed[i].x);
        y0 = std::min(y0, placed[i].y);
        x1 = std::max(x1, placed[i].x + boxes[i].w * s);
        y1 = std::max(y1, placed[i].y + boxes[i].h * s);
    }
    double shift_x = (1 - (x1 - x0)) * 0.5 - x0;
    double shift_y = (1 - (y1 - y0)) * 0.5 - y0;

    std::vector<IslandTransform> transforms(boxes.size());
    for (size_t i = 0; i < boxes.size(); ++i) {
        IslandTransform& tr = transforms[i];
        tr.island_id = boxes[i].island_id;
        tr.scale = s;
        tr.translate = {placed[i].x + shift_x - s * boxes[i].min_u,
                        placed[i].y + shift_y - s * boxes[i].min_v};
    }
    std::sort(transforms.begin(), transforms.end(),
              [](const IslandTransform& a, const IslandTransform& b) {
                  return a.island_id < b.island_id;
              });
    return transforms;
}

}  // namespace omage
