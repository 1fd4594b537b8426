// remesher.hpp — decode an omage back into a triangle mesh with per-
// vertex UVs, material attributes, and patch labels.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "omage/baker.hpp"
#include "omage/core.hpp"
#include "omage/image.hpp"
#include "omage/mesh.hpp"

namespace omage {

// Decoded mesh: position index == uv index == vertex id. Every vertex
// comes from one occupied pixel; its uv is that pixel's center.
struct DecodedMesh : IndexedMesh {
    std::vector<int> patch_label;      // per vertex
    std::vector<Vec3> vertex_normals;  // per vertex, unit
    std::vector<Vec3> vertex_albedo;
    std::vector<double> vertex_metalness;
    std::vector<double> vertex_roughness;
    std::optional<NormalizedFrame> frame;  // set once world units are restored
};

// 4-connected components of the occupancy map. Labels follow raster-scan
// discovery order starting at 0; unoccupied pixels get -1.
inline std::vector<int32_t> label_patches(const ObjectImage& img) {
    const int R = img.resolution;
    std::vector<int32_t> labels(static_cast<size_t>(R) * R, -1);
    std::vector<int32_t> stack;
    int32_t next = 0;
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            size_t p = static_cast<size_t>(i) * R + j;
            if (!img.occupied(i, j) || labels[p] >= 0) continue;
            labels[p] = next;
            stack.push_back(static_cast<int32_t>(p));
            while (!stack.empty()) {
                int32_t cur = stack.back();
                stack.pop_back();
                int ci = cur / R, cj = cur % R;
                const int ni[4] = {ci - 1, ci + 1, ci, ci};
                const int nj[4] = {cj, cj, cj - 1, cj + 1};
                for (int k = 0; k < 4; ++k) {
                    if (ni[k] < 0 || ni[k] >= R || nj[k] < 0 || nj[k] >= R) continue;
                    size_t q = static_cast<size_t>(ni[k]) * R + nj[k];
                    if (!img.occupied(ni[k], nj[k]) || labels[q] >= 0) continue;
                    labels[q] = next;
                    stack.push_back(static_cast<int32_t>(q));
                }
            }
            ++next;
        }
    }
    return labels;
}

// Per 2x2 cell (i,j): triangle (pi[i,j], pi[i,j+1], pi[i+1,j]) is
// emitted iff those three occupancies are all 1, and triangle
// (pi[i+1,j+1], pi[i,j+1], pi[i+1,j]) likewise. Occupied pixels that
// end up in no triangle are dropped. Positions stay in the unit cube;
// call restore_world to map them back.
inline DecodedMesh remesh(const ObjectImage& img) {
    const int R = img.resolution;
    bool any = false;
    for (size_t p = 0; p < img.pixel_count() && !any; ++p)
        any = img.channels[p * kChannels + kAlpha] != 0.0f;
    if (!any) throw Error(ErrorCode::EmptyImage, "omage has no occupied pixel");

    auto occ = [&](int i, int j) { return img.occupied(i, j); };

    // Mark pixels referenced by at least one emitted triangle.
    std::vector<uint8_t> used(static_cast<size_t>(R) * R, 0);
    for (int i = 0; i + 1 < R; ++i) {
        for (int j = 0; j + 1 < R; ++j) {
            if (occ(i, j) && occ(i, j + 1) && occ(i + 1, j)) {
                used[static_cast<size_t>(i) * R + j] = 1;
                used[static_cast<size_t>(i) * R + j + 1] = 1;
                used[static_cast<size_t>(i + 1) * R + j] = 1;
            }
            if (occ(i + 1, j + 1) && occ(i, j + 1) && occ(i + 1, j)) {
                used[static_cast<size_t>(i + 1) * R + j + 1] = 1;
                used[static_cast<size_t>(i) * R + j + 1] = 1;
                used[static_cast<size_t>(i + 1) * R + j] = 1;
            }
        }
    }

    std::vector<int32_t> vid(static_cast<size_t>(R) * R, -1);
    std::vector<int32_t> labels = label_patches(img);
    DecodedMesh out;
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            size_t p = static_cast<size_t>(i) * R + j;
            if (!used[p]) continue;
            vid[p] = static_cast<int32_t>(out.positions.size());
            const float* ch = &img.channels[p * kChannels];
            out.positions.push_back({ch[kPosX], ch[kPosY], ch[kPosZ]});
            out.uvs.push_back({(j + 0.5) / R, (i + 0.5) / R});
            out.patch_label.push_back(labels[p]);
            Vec3 n{ch[kNormX] * 2.0 - 1.0, ch[kNormY] * 2.0 - 1.0, ch[kNormZ] * 2.0 - 1.0};
            out.vertex_normals.push_back(normalize(n));  // may be zero; fixed up below
            out.vertex_albedo.push_back({ch[kAlbedoR], ch[kAlbedoG], ch[kAlbedoB]});
            out.vertex_metalness.push_back(ch[kMetal]);
            out.vertex_roughness.push_back(ch[kRough]);
        }
    }

    auto corner = [&](int i, int j) {
        int32_t v = vid[static_cast<size_t>(i) * R + j];
        return Corner{v, v};
    };
    for (int i = 0; i + 1 < R; ++i) {
        for (int j = 0; j + 1 < R; ++j) {
            if (occ(i, j) && occ(i, j + 1) && occ(i + 1, j))
                out.triangles.push_back({corner(i, j), corner(i, j + 1), corner(i + 1, j)});
            if (occ(i + 1, j + 1) && occ(i, j + 1) && occ(i + 1, j))
                out.triangles.push_back(
                    {corner(i + 1, j + 1), corner(i, j + 1), corner(i + 1, j)});
        }
    }

    // Zero-length decoded normals (e.g. pooled to cancellation) fall
    // back to the area-weighted mean of incident face normals. The two
    // cell triangle types wind oppositely in uv, so each face normal is
    // oriented by its uv winding to keep contributions consistent.
    std::vector<Vec3> face_acc(out.positions.size(), Vec3{0, 0, 0});
    bool need_fallback = false;
    for (const Vec3& n : out.vertex_normals)
        if (length_sq(n) < 0.25) need_fallback = true;
    if (need_fallback) {
        for (const Triangle& tri : out.triangles) {
            Vec3 a = out.positions[tri[0].pos];
            Vec3 b = out.positions[tri[1].pos];
            Vec3 c = out.positions[tri[2].pos];
            double orient =
                cross2(out.uvs[tri[0].uv], out.uvs[tri[1].uv], out.uvs[tri[2].uv]) < 0
                    ? -1.0
                    : 1.0;
            Vec3 n = cross(b - a, c - a) * orient;
            for (const Corner& co : tri) face_acc[co.pos] = face_acc[co.pos] + n;
        }
        for (size_t v = 0; v < out.vertex_normals.size(); ++v) {
            if (length_sq(out.vertex_normals[v]) >= 0.25) continue;
            Vec3 n = normalize(face_acc[v]);
            out.vertex_normals[v] = length_sq(n) > 0 ? n : Vec3{0, 0, 1};
        }
    }
    return out;
}

// Maps decoded positions from the unit cube back to world units.
inline void restore_world(DecodedMesh& mesh, const NormalizedFrame& frame) {
    for (Vec3& p : mesh.positions) p = frame.to_world(p);
    mesh.frame = frame;
}

}  // namespace omage
