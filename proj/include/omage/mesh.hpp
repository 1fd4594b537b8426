// mesh.hpp — indexed triangle mesh with per-corner UVs and PBR material maps.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "omage/core.hpp"

namespace omage {

// A single raster map. Values are floats in [0,1]; albedo is stored
// linear (sRGB decoded at load), other maps are read as linear.
struct Texture {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3
    std::vector<float> data;  // row-major, channel-interleaved

    bool empty() const { return width <= 0 || height <= 0; }
    float at(int x, int y, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
};

// Source PBR maps sampled during baking. Missing maps fall back to
// constant defaults: albedo (0.8,0.8,0.8), metalness 0, roughness 0.5;
// a missing normal map means normals come from mesh geometry.
struct MaterialSet {
    std::optional<Texture> albedo;     // 3 channels, linear
    std::optional<Texture> normal;     // 3 channels, raw [0,1] encoding of (n+1)/2
    std::optional<Texture> metalness;  // 1 channel
    std::optional<Texture> roughness;  // 1 channel

    static constexpr Vec3 kDefaultAlbedo{0.8, 0.8, 0.8};
    static constexpr double kDefaultMetalness = 0.0;
    static constexpr double kDefaultRoughness = 0.5;
};

// One triangle corner: indices into IndexedMesh::positions and ::uvs.
struct Corner {
    int pos = -1;
    int uv = -1;
    bool operator==(const Corner&) const = default;
};

using Triangle = std::array<Corner, 3>;

// Triangle mesh with split position/uv indexing, as parsed from OBJ.
// UVs are mandatory for every corner.
struct IndexedMesh {
    std::vector<Vec3> positions;
    std::vector<Vec2> uvs;
    std::vector<Triangle> triangles;
    std::shared_ptr<MaterialSet> material;  // may be null

    size_t triangle_count() const { return triangles.size(); }
};

struct Bbox3 {
    Vec3 min{1e300, 1e300, 1e300};
    Vec3 max{-1e300, -1e300, -1e300};

    void expand(Vec3 p) {
        min.x = std::min(min.x, p.x);
        min.y = std::min(min.y, p.y);
        min.z = std::min(min.z, p.z);
        max.x = std::max(max.x, p.x);
        max.y = std::max(max.y, p.y);
        max.z = std::max(max.z, p.z);
    }
    bool valid() const { return min.x <= max.x; }
    Vec3 extent() const { return {max.x - min.x, max.y - min.y, max.z - min.z}; }
    Vec3 center() const {
        return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5, (min.z + max.z) * 0.5};
    }
    double diagonal() const { return valid() ? length(extent()) : 0.0; }
};

// Bounds over positions referenced by at least one triangle.
inline Bbox3 referenced_bounds(const IndexedMesh& mesh) {
    Bbox3 box;
    for (const Triangle& tri : mesh.triangles)
        for (const Corner& c : tri) box.expand(mesh.positions[c.pos]);
    return box;
}

inline double triangle_area3d(const IndexedMesh& mesh, const Triangle& tri) {
    Vec3 a = mesh.positions[tri[0].pos];
    Vec3 b = mesh.positions[tri[1].pos];
    Vec3 c = mesh.positions[tri[2].pos];
    return 0.5 * length(cross(b - a, c - a));
}

inline Vec3 triangle_face_normal(const IndexedMesh& mesh, const Triangle& tri) {
    Vec3 a = mesh.positions[tri[0].pos];
    Vec3 b = mesh.positions[tri[1].pos];
    Vec3 c = mesh.positions[tri[2].pos];
    return normalize(cross(b - a, c - a));
}

// Area-weighted vertex normals, one per position index. Unreferenced
// positions get a zero normal.
inline std::vector<Vec3> compute_vertex_normals(const IndexedMesh& mesh) {
    std::vector<Vec3> normals(mesh.positions.size(), Vec3{0, 0, 0});
    for (const Triangle& tri : mesh.triangles) {
        Vec3 a = mesh.positions[tri[0].pos];
        Vec3 b = mesh.positions[tri[1].pos];
        Vec3 c = mesh.positions[tri[2].pos];
        Vec3 n = cross(b - a, c - a);  // magnitude = 2*area, so this is area weighting
        for (const Corner& corner : tri) {
            normals[corner.pos] = normals[corner.pos] + n;
        }
    }
    for (Vec3& n : normals) n = normalize(n);
    return normals;
}

}  // namespace omage
