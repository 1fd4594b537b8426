// metrics.hpp — representation fidelity: area-weighted surface sampling,
// symmetric squared Chamfer distance, open-boundary statistics, and the
// combined report for an encode/decode pair.
#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "omage/baker.hpp"
#include "omage/core.hpp"
#include "omage/image.hpp"
#include "omage/mesh.hpp"
#include "omage/remesher.hpp"

namespace omage {

struct FidelityReport {
    double chamfer = 0;              // squared model units, symmetric mean
    double occupancy_ratio = 0;
    double open_boundary_length = 0; // model units
    int patch_count = 0;
    int cross_patch_triangles = 0;
    int64_t byte_size = 0;           // OMG1 bytes: 16 + R*R*48
    int sample_count = 0;
};

// Draws n points: triangle chosen by area-weighted inversion sampling,
// then a uniform barycentric point (reflected into the triangle).
// Three rng draws per point, so output is a pure function of the seed.
inline std::vector<Vec3> sample_surface(const IndexedMesh& mesh, int n, uint64_t seed) {
    if (n < 1)
        throw Error(ErrorCode::InvalidConfig, "sample count must be positive");
    std::vector<double> cdf;
    cdf.reserve(mesh.triangles.size());
    double total = 0;
    for (const Triangle& tri : mesh.triangles) {
        total += triangle_area3d(mesh, tri);
        cdf.push_back(total);
    }
    if (total <= 0)
        throw Error(ErrorCode::ZeroArea, "mesh has zero surface area");

    Pcg32 rng(seed);
    std::vector<Vec3> points;
    points.reserve(n);
    for (int s = 0; s < n; ++s) {
        double r = rng.next_double() * total;
        size_t t = std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin();
        if (t >= cdf.size()) t = cdf.size() - 1;
        double u = rng.next_double();
        double v = rng.next_double();
        if (u + v > 1) {
            u = 1 - u;
            v = 1 - v;
        }
        const Triangle& tri = mesh.triangles[t];
        Vec3 a = mesh.positions[tri[0].pos];
        Vec3 b = mesh.positions[tri[1].pos];
        Vec3 c = mesh.positions[tri[2].pos];
        points.push_back(a + (b - a) * u + (c - a) * v);
    }
    return points;
}

// Exact nearest-neighbor KD-tree. Median split on the widest axis of
// each range; queries prune on the splitting plane, so results equal
// brute force.
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3>& pts) : pts_(pts), idx_(pts.size()), axis_(pts.size(), 0) {
        for (size_t i = 0; i < idx_.size(); ++i) idx_[i] = static_cast<int>(i);
        if (!pts_.empty()) build(0, static_cast<int>(pts_.size()));
    }

    double nearest_sq(Vec3 q) const {
        double best = 1e300;
        search(0, static_cast<int>(idx_.size()), q, best);
        return best;
    }

private:
    static constexpr int kLeaf = 8;

    static double coord(Vec3 p, int a) { return a == 0 ? p.x : (a == 1 ? p.y : p.z); }
    static double dist_sq(Vec3 a, Vec3 b) {
        double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
        return dx * dx + dy * dy + dz * dz;
    }

    void build(int lo, int hi) {
        if (hi - lo <= kLeaf) return;
        Vec3 mn = pts_[idx_[lo]], mx = mn;
        for (int i = lo; i < hi; ++i) {
            Vec3 p = pts_[idx_[i]];
            mn = {std::min(mn.x, p.x), std::min(mn.y, p.y), std::min(mn.z, p.z)};
            mx = {std::max(mx.x, p.x), std::max(mx.y, p.y), std::max(mx.z, p.z)};
        }
        Vec3 e = mx - mn;
        int a = e.x >= e.y && e.x >= e.z ? 0 : (e.y >= e.z ? 1 : 2);
        int mid = (lo + hi) / 2;
        std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                         [&](int l, int r) { return coord(pts_[l], a) < coord(pts_[r], a); });
        axis_[mid] = a;
        build(lo, mid);
        build(mid + 1, hi);
    }

    void search(int lo, int hi, Vec3 q, double& best) const {
        if (hi - lo <= kLeaf) {
            for (int i = lo; i < hi; ++i)
                best = std::min(best, dist_sq(q, pts_[idx_[i]]));
            return;
        }
        int mid = (lo + hi) / 2;
        int a = axis_[mid];
        Vec3 m = pts_[idx_[mid]];
        best = std::min(best, dist_sq(q, m));
        double d = coord(q, a) - coord(m, a);
        if (d < 0) {
            search(lo, mid, q, best);
            if (d * d < best) search(mid + 1, hi, q, best);
        } else {
            search(mid + 1, hi, q, best);
            if (d * d < best) search(lo, mid, q, best);
        }
    }

    std::vector<Vec3> pts_;
    std::vector<int> idx_;
    std::vector<int> axis_;
};

// Symmetric squared Chamfer distance: mean over a of the squared
// distance to the nearest point of b, plus the mirrored term. Queries
// run in parallel into a scratch vector; sums are serial so the value
// is thread-count independent.
inline double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.empty() || b.empty())
        throw Error(ErrorCode::InvalidConfig, "chamfer needs two non-empty clouds");
    int threads = default_thread_count();
    double result = 0;
    const std::vector<Vec3>* from = &a;
    const std::vector<Vec3>* to = &b;
    for (int side = 0; side < 2; ++side) {
        KdTree tree(*to);
        std::vector<double> d(from->size());
        parallel_for(static_cast<int64_t>(from->size()), threads, [&](int64_t lo, int64_t hi) {
            for (int64_t i = lo; i < hi; ++i) d[i] = tree.nearest_sq((*from)[i]);
        });
        double sum = 0;
        for (double v : d) sum += v;
        result += sum / static_cast<double>(from->size());
        std::swap(from, to);
    }
    return result;
}

// Total length of edges incident to exactly one triangle. Edges are
// keyed by position-index pairs and summed in key order so the result
// does not depend on hashing.
inline double open_boundary_length(const std::vector<Vec3>& positions,
                                   const std::vector<Triangle>& triangles) {
    std::unordered_map<uint64_t, int> count;
    count.reserve(triangles.size() * 3);
    auto key = [](int a, int b) {
        uint32_t lo = static_cast<uint32_t>(std::min(a, b));
        uint32_t hi = static_cast<uint32_t>(std::max(a, b));
        return (static_cast<uint64_t>(lo) << 32) | hi;
    };
    for (const Triangle& tri : triangles)
        for (int k = 0; k < 3; ++k)
            ++count[key(tri[k].pos, tri[(k + 1) % 3].pos)];

    std::vector<uint64_t> open;
    for (const auto& [k, c] : count)
        if (c == 1) open.push_back(k);
    std::sort(open.begin(), open.end());
    double total = 0;
    for (uint64_t k : open) {
        Vec3 pa = positions[static_cast<int>(k >> 32)];
        Vec3 pb = positions[static_cast<int>(k & 0xffffffffu)];
        total += length(pa - pb);
    }
    return total;
}

// Gap between the two largest patches: symmetric mean nearest-neighbor
// euclidean distance between their open-boundary vertex sets. Returns 0
// when fewer than two patches carry boundary vertices.
inline double patch_boundary_gap(const DecodedMesh& mesh) {
    std::unordered_map<uint64_t, int> count;
    auto key = [](int a, int b) {
        uint32_t lo = static_cast<uint32_t>(std::min(a, b));
        uint32_t hi = static_cast<uint32_t>(std::max(a, b));
        return (static_cast<uint64_t>(lo) << 32) | hi;
    };
    for (const Triangle& tri : mesh.triangles)
        for (int k = 0; k < 3; ++k)
            ++count[key(tri[k].pos, tri[(k + 1) % 3].pos)];

    std::vector<uint8_t> on_boundary(mesh.positions.size(), 0);
    for (const auto& [k, c] : count) {
        if (c != 1) continue;
        on_boundary[k >> 32] = 1;
        on_boundary[k & 0xffffffffu] = 1;
    }

    std::unordered_map<int, std::vector<Vec3>> by_patch;
    for (size_t v = 0; v < mesh.positions.size(); ++v)
        if (on_boundary[v]) by_patch[mesh.patch_label[v]].push_back(mesh.positions[v]);
    if (by_patch.size() < 2) return 0;

    std::vector<std::pair<int, const std::vector<Vec3>*>> groups;
    for (const auto& [label, pts] : by_patch) groups.emplace_back(label, &pts);
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.second->size() != b.second->size()) return a.second->size() > b.second->size();
        return a.first < b.first;
    });

    const std::vector<Vec3>& A = *groups[0].second;
    const std::vector<Vec3>& B = *groups[1].second;
    auto mean_nn = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
        double sum = 0;
        for (Vec3 p : from) {
            double best = 1e300;
            for (Vec3 q : to) best = std::min(best, length_sq(p - q));
            sum += std::sqrt(best);
        }
        return sum / static_cast<double>(from.size());
    };
    return 0.5 * (mean_nn(A, B) + mean_nn(B, A));
}

// Full fidelity report for an original mesh against its encoded omage.
// The omage is remeshed, restored to world units through the frame, and
// compared by Chamfer over n samples per surface.
inline FidelityReport fidelity(const IndexedMesh& original, const ObjectImage& img,
                               const NormalizedFrame& frame, int n, uint64_t seed) {
    DecodedMesh dec = remesh(img);
    restore_world(dec, frame);

    FidelityReport rep;
    rep.occupancy_ratio = occupancy_ratio(img);
    rep.byte_size = 16 + static_cast<int64_t>(img.resolution) * img.resolution * kChannels * 4;
    rep.sample_count = n;
    rep.open_boundary_length = open_boundary_length(dec.positions, dec.triangles);

    std::vector<int32_t> labels = label_patches(img);
    int max_label = -1;
    for (int32_t l : labels) max_label = std::max(max_label, l);
    rep.patch_count = max_label + 1;
    for (const Triangle& tri : dec.triangles) {
        int l0 = dec.patch_label[tri[0].pos];
        if (dec.patch_label[tri[1].pos] != l0 || dec.patch_label[tri[2].pos] != l0)
            ++rep.cross_patch_triangles;
    }

    std::vector<Vec3> pa = sample_surface(original, n, seed);
    std::vector<Vec3> pb = sample_surface(dec, n, seed ^ 0x9e3779b97f4a7c15ULL);
    rep.chamfer = chamfer(pa, pb);
    return rep;
}

}  // namespace omage
