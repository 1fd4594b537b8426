// baker.hpp — rasterize the repacked atlas into an ObjectImage: geometry
// by barycentric interpolation, materials by resampling the source maps
// through the original (pre-packing) UVs.
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "omage/atlas.hpp"
#include "omage/core.hpp"
#include "omage/image.hpp"
#include "omage/mesh.hpp"
#include "omage/packer.hpp"
#include "omage/raster.hpp"

namespace omage {

// World-to-unit-cube similarity: unit = (p - center) * scale + 0.5.
// The longest bbox axis maps onto exactly [0,1]; the others are
// centered inside it.
struct NormalizedFrame {
    Vec3 center{0, 0, 0};
    double scale = 1;

    Vec3 to_unit(Vec3 p) const {
        return (p - center) * scale + Vec3{0.5, 0.5, 0.5};
    }
    Vec3 to_world(Vec3 q) const {
        return (q - Vec3{0.5, 0.5, 0.5}) * (1.0 / scale) + center;
    }
};

// Maps all positions into [0,1]^3, preserving aspect. The frame inverts
// the mapping so decoders can restore world units.
inline std::pair<IndexedMesh, NormalizedFrame> normalize_positions(const IndexedMesh& mesh) {
    Bbox3 box = referenced_bounds(mesh);
    if (!box.valid())
        throw Error(ErrorCode::DegenerateBounds, "mesh has no triangles");
    Vec3 e = box.extent();
    double longest = std::max({e.x, e.y, e.z});
    if (longest <= 0)
        throw Error(ErrorCode::DegenerateBounds, "mesh bbox has zero extent");

    NormalizedFrame frame{box.center(), 1.0 / longest};
    IndexedMesh out = mesh;
    for (Vec3& p : out.positions) p = frame.to_unit(p);
    return {std::move(out), frame};
}

namespace detail {

// Clamp-to-edge bilinear fetch; UVs outside [0,1] wrap by repeat first.
// The v axis is bottom-up (OBJ convention), raster rows are top-down.
inline void sample_bilinear(const Texture& tex, Vec2 uv, double* out) {
    double u = uv.x, v = uv.y;
    if (u < 0 || u > 1) u -= std::floor(u);
    if (v < 0 || v > 1) v -= std::floor(v);
    double fx = u * tex.width - 0.5;
    double fy = (1.0 - v) * tex.height - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double ax = fx - x0, ay = fy - y0;
    int x1 = std::clamp(x0 + 1, 0, tex.width - 1);
    int y1 = std::clamp(y0 + 1, 0, tex.height - 1);
    x0 = std::clamp(x0, 0, tex.width - 1);
    y0 = std::clamp(y0, 0, tex.height - 1);
    for (int c = 0; c < tex.channels; ++c) {
        double top = tex.at(x0, y0, c) * (1 - ax) + tex.at(x1, y0, c) * ax;
        double bot = tex.at(x0, y1, c) * (1 - ax) + tex.at(x1, y1, c) * ax;
        out[c] = top * (1 - ay) + bot * ay;
    }
}

}  // namespace detail

// Bakes the kept islands into an R x R x 12 omage. Triangle footprints
// come from the packed UVs; positions are normalized-mesh corner
// positions, normals interpolate the area-weighted vertex normals, and
// material channels resample the source maps at the original UVs.
// Where triangles overlap a pixel, the largest original triangle index
// wins; pass one resolves winners with an order-free atomic max, pass
// two shades winners independently, so the result does not depend on
// the thread count.
inline std::pair<ObjectImage, NormalizedFrame> bake(const IndexedMesh& mesh,
                                                    const std::vector<UvIsland>& islands,
                                                    const std::vector<IslandTransform>& transforms,
                                                    const MaterialSet* materials,
                                                    int resolution) {
    if (resolution < 1)
        throw Error(ErrorCode::InvalidConfig, "bake resolution must be positive");
    auto [unit_mesh, frame] = normalize_positions(mesh);
    std::vector<Vec3> vertex_normals = compute_vertex_normals(unit_mesh);

    // Per-triangle packing transform; triangles of dropped islands keep
    // a null entry and are skipped.
    std::vector<const IslandTransform*> tri_transform(mesh.triangles.size(), nullptr);
    std::vector<int> baked;
    for (const UvIsland& isl : islands) {
        const IslandTransform* tr = nullptr;
        for (const IslandTransform& t : transforms)
            if (t.island_id == isl.island_id) {
                tr = &t;
                break;
            }
        if (!tr)
            throw Error(ErrorCode::TransformMissing,
                        "island " + std::to_string(isl.island_id) + " has no transform");
        for (int t : isl.triangle_ids) {
            tri_transform[t] = tr;
            baked.push_back(t);
        }
    }
    std::sort(baked.begin(), baked.end());

    const int R = resolution;
    const MaterialSet* mat = materials;
    int threads = default_thread_count();

    // Pass 1: winner index per pixel (-1 = uncovered).
    std::vector<int32_t> winner(static_cast<size_t>(R) * R, -1);
    auto packed_corners = [&](int t, Vec2 p[3]) {
        const Triangle& tri = unit_mesh.triangles[t];
        const IslandTransform& tr = *tri_transform[t];
        for (int k = 0; k < 3; ++k) {
            Vec2 uv = tr.apply(unit_mesh.uvs[tri[k].uv]);
            p[k] = {uv.x * R, uv.y * R};
        }
    };
    parallel_for(static_cast<int64_t>(baked.size()), threads, [&](int64_t lo, int64_t hi) {
        for (int64_t bi = lo; bi < hi; ++bi) {
            int t = baked[bi];
            Vec2 p[3];
            packed_corners(t, p);
            rasterize_triangle(p[0], p[1], p[2], R, R, [&](int i, int j) {
                atomic_max_i32(winner[static_cast<size_t>(i) * R + j], t);
            });
        }
    });

    // Pass 2: shade each covered pixel from its winning triangle.
    ObjectImage img(R);
    parallel_for(static_cast<int64_t>(R) * R, threads, [&](int64_t lo, int64_t hi) {
        for (int64_t px = lo; px < hi; ++px) {
            int t = winner[px];
            if (t < 0) continue;
            int i = static_cast<int>(px / R);
            int j = static_cast<int>(px % R);

            Vec2 p[3];
            packed_corners(t, p);
            RasterTriangle rt{p[0], p[1], p[2]};
            if (!rt.init()) continue;
            double w0, w1, w2;
            rt.barycentric({j + 0.5, i + 0.5}, w0, w1, w2);

            const Triangle& tri = unit_mesh.triangles[t];
            Vec3 pos = unit_mesh.positions[tri[0].pos] * w0 +
                       unit_mesh.positions[tri[1].pos] * w1 +
                       unit_mesh.positions[tri[2].pos] * w2;
            Vec3 n = vertex_normals[tri[0].pos] * w0 +
                     vertex_normals[tri[1].pos] * w1 +
                     vertex_normals[tri[2].pos] * w2;
            if (length_sq(n) < 1e-20) n = triangle_face_normal(unit_mesh, tri);
            n = normalize(n);
            Vec2 uv = unit_mesh.uvs[tri[0].uv] * w0 + unit_mesh.uvs[tri[1].uv] * w1 +
                      unit_mesh.uvs[tri[2].uv] * w2;

            Vec3 albedo = MaterialSet::kDefaultAlbedo;
            double metal = MaterialSet::kDefaultMetalness;
            double rough = MaterialSet::kDefaultRoughness;
            if (mat) {
                double buf[3];
                if (mat->albedo && !mat->albedo->empty()) {
                    detail::sample_bilinear(*mat->albedo, uv, buf);
                    albedo = {buf[0], buf[1], buf[2]};
                }
                if (mat->metalness && !mat->metalness->empty()) {
                    detail::sample_bilinear(*mat->metalness, uv, buf);
                    metal = buf[0];
                }
                if (mat->roughness && !mat->roughness->empty()) {
                    detail::sample_bilinear(*mat->roughness, uv, buf);
                    rough = buf[0];
                }
            }

            float* out = &img.channels[static_cast<size_t>(px) * kChannels];
            out[kPosX] = static_cast<float>(clamp01(pos.x));
            out[kPosY] = static_cast<float>(clamp01(pos.y));
            out[kPosZ] = static_cast<float>(clamp01(pos.z));
            out[kAlpha] = 1.0f;
            out[kNormX] = static_cast<float>(clamp01((n.x + 1) * 0.5));
            out[kNormY] = static_cast<float>(clamp01((n.y + 1) * 0.5));
            out[kNormZ] = static_cast<float>(clamp01((n.z + 1) * 0.5));
            out[kAlbedoR] = static_cast<float>(clamp01(albedo.x));
            out[kAlbedoG] = static_cast<float>(clamp01(albedo.y));
            out[kAlbedoB] = static_cast<float>(clamp01(albedo.z));
            out[kMetal] = static_cast<float>(clamp01(metal));
            out[kRough] = static_cast<float>(clamp01(rough));
        }
    });

    return {std::move(img), frame};
}

}  // namespace omage
