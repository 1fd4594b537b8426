// atlas.hpp — UV-atlas repair and structure: weld coincident corners,
// split triangles into UV islands, rank islands by 3D area, and check
// the atlas for out-of-bounds UVs and intra-island self-overlap.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "omage/core.hpp"
#include "omage/mesh.hpp"
#include "omage/raster.hpp"

namespace omage {

// One UV chart: a connected set of triangles in (position, uv) corner
// space, with its tight UV bounding box and total 3D surface area.
struct UvIsland {
    std::vector<int> triangle_ids;  // ascending original triangle indices
    double min_u = 0, min_v = 0, max_u = 0, max_v = 0;
    double area3d = 0;
    int island_id = 0;

    double width() const { return max_u - min_u; }
    double height() const { return max_v - min_v; }
};

struct AtlasReport {
    int island_count = 0;
    std::vector<int> dropped_island_ids;
    double dropped_area_fraction = 0;
    bool self_overlap_detected = false;
    int out_of_bounds_uv_count = 0;
};

// Union-find whose root is always the smallest member index, so the
// canonical representative of a cluster is deterministic.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<int> parent_;
};

namespace detail {

inline uint64_t cell_hash(int64_t x, int64_t y, int64_t z) {
    uint64_t h = static_cast<uint64_t>(x) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<uint64_t>(y) * 0xc2b2ae3d27d4eb4full;
    h ^= static_cast<uint64_t>(z) * 0x165667b19e3779f9ull;
    h ^= h >> 29;
    return h;
}

}  // namespace detail

// Default welding tolerances: 3D scaled by object size, UV absolute.
inline double default_eps3d(const IndexedMesh& mesh) {
    return 1e-6 * referenced_bounds(mesh).diagonal();
}
constexpr double kDefaultEpsUv = 1e-6;

// Welds corners whose 3D positions are within eps3d AND UVs within
// eps_uv (euclidean, transitive closure). Each cluster collapses to
// its lexicographically smallest (position index, uv index) pair, and
// the position/uv arrays are compacted to the referenced entries in
// original order. Triangle count is unchanged. Idempotent.
inline IndexedMesh merge_coincident_vertices(const IndexedMesh& mesh,
                                             double eps3d, double eps_uv) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(mesh.triangles.size() * 3);
    for (const Triangle& tri : mesh.triangles)
        for (const Corner& c : tri) pairs.emplace_back(c.pos, c.uv);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const int n = static_cast<int>(pairs.size());

    // Hash corners into 3D cells of the weld radius; only the 27
    // surrounding cells can hold merge partners.
    const double cell = std::max(eps3d, 1e-12);
    const double eps3d_sq = eps3d * eps3d;
    const double eps_uv_sq = eps_uv * eps_uv;
    std::unordered_map<uint64_t, std::vector<int>> grid;
    grid.reserve(static_cast<size_t>(n) * 2);
    std::vector<std::array<int64_t, 3>> cells(n);
    for (int i = 0; i < n; ++i) {
        Vec3 p = mesh.positions[pairs[i].first];
        cells[i] = {static_cast<int64_t>(std::floor(p.x / cell)),
                    static_cast<int64_t>(std::floor(p.y / cell)),
                    static_cast<int64_t>(std::floor(p.z / cell))};
        grid[detail::cell_hash(cells[i][0], cells[i][1], cells[i][2])].push_back(i);
    }

    UnionFind uf(n);
    for (int i = 0; i < n; ++i) {
        Vec3 pi = mesh.positions[pairs[i].first];
        Vec2 ti = mesh.uvs[pairs[i].second];
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find(detail::cell_hash(
                        cells[i][0] + dx, cells[i][1] + dy, cells[i][2] + dz));
                    if (it == grid.end()) continue;
                    for (int j : it->second) {
                        if (j >= i) continue;
                        Vec3 dp = pi - mesh.positions[pairs[j].first];
                        if (length_sq(dp) > eps3d_sq) continue;
                        Vec2 dt = ti - mesh.uvs[pairs[j].second];
                        if (dot(dt, dt) > eps_uv_sq) continue;
                        uf.unite(i, j);
                    }
                }
    }

    // Remap every corner to its cluster root's original index pair,
    // then compact the attribute arrays to the referenced subset.
    std::vector<char> pos_used(mesh.positions.size(), 0);
    std::vector<char> uv_used(mesh.uvs.size(), 0);
    IndexedMesh out;
    out.material = mesh.material;
    out.triangles.resize(mesh.triangles.size());
    auto pair_index = [&pairs](const Corner& c) {
        return static_cast<int>(std::lower_bound(pairs.begin(), pairs.end(),
                                                 std::make_pair(c.pos, c.uv)) -
                                pairs.begin());
    };
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto& canon = pairs[uf.find(pair_index(mesh.triangles[t][k]))];
            out.triangles[t][k] = {canon.first, canon.second};
            pos_used[canon.first] = 1;
            uv_used[canon.second] = 1;
        }
    }

    std::vector<int> pos_map(mesh.positions.size(), -1);
    std::vector<int> uv_map(mesh.uvs.size(), -1);
    for (size_t i = 0; i < mesh.positions.size(); ++i) {
        if (!pos_used[i]) continue;
        pos_map[i] = static_cast<int>(out.positions.size());
        out.positions.push_back(mesh.positions[i]);
    }
    for (size_t i = 0; i < mesh.uvs.size(); ++i) {
        if (!uv_used[i]) continue;
        uv_map[i] = static_cast<int>(out.uvs.size());
        out.uvs.push_back(mesh.uvs[i]);
    }
    for (Triangle& tri : out.triangles)
        for (Corner& c : tri) c = {pos_map[c.pos], uv_map[c.uv]};
    return out;
}

inline IndexedMesh merge_coincident_vertices(const IndexedMesh& mesh) {
    return merge_coincident_vertices(mesh, default_eps3d(mesh), kDefaultEpsUv);
}

// Connected components of the triangle graph where two triangles are
// adjacent iff they share a (position index, uv index) corner pair.
// Islands are ordered by descending area3d, ties broken by smallest
// member triangle index; island_id is the position in that order.
inline std::vector<UvIsland> extract_islands(const IndexedMesh& mesh) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(mesh.triangles.size() * 3);
    for (const Triangle& tri : mesh.triangles)
        for (const Corner& c : tri) pairs.emplace_back(c.pos, c.uv);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    auto pair_index = [&pairs](const Corner& c) {
        return static_cast<int>(std::lower_bound(pairs.begin(), pairs.end(),
                                                 std::make_pair(c.pos, c.uv)) -
                                pairs.begin());
    };

    UnionFind uf(static_cast<int>(pairs.size()));
    for (const Triangle& tri : mesh.triangles) {
        int a = pair_index(tri[0]);
        uf.unite(a, pair_index(tri[1]));
        uf.unite(a, pair_index(tri[2]));
    }

    std::unordered_map<int, int> root_to_slot;
    std::vector<UvIsland> islands;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Triangle& tri = mesh.triangles[t];
        int root = uf.find(pair_index(tri[0]));
        auto [it, fresh] = root_to_slot.try_emplace(root, static_cast<int>(islands.size()));
        if (fresh) islands.emplace_back();
        UvIsland& isl = islands[it->second];
        if (isl.triangle_ids.empty()) {
            Vec2 uv0 = mesh.uvs[tri[0].uv];
            isl.min_u = isl.max_u = uv0.x;
            isl.min_v = isl.max_v = uv0.y;
        }
        isl.triangle_ids.push_back(static_cast<int>(t));
        isl.area3d += triangle_area3d(mesh, tri);
        for (const Corner& c : tri) {
            Vec2 uv = mesh.uvs[c.uv];
            isl.min_u = std::min(isl.min_u, uv.x);
            isl.max_u = std::max(isl.max_u, uv.x);
            isl.min_v = std::min(isl.min_v, uv.y);
            isl.max_v = std::max(isl.max_v, uv.y);
        }
    }

    std::sort(islands.begin(), islands.end(),
              [](const UvIsland& a, const UvIsland& b) {
                  if (a.area3d != b.area3d) return a.area3d > b.area3d;
                  return a.triangle_ids.front() < b.triangle_ids.front();
              });
    for (size_t i = 0; i < islands.size(); ++i)
        islands[i].island_id = static_cast<int>(i);
    return islands;
}

// Keeps the min(k, N) islands of largest area3d. The report records the
// dropped islands and the surface-area fraction they carried.
inline std::pair<std::vector<UvIsland>, AtlasReport> select_top_k(
    const std::vector<UvIsland>& islands, int k) {
    std::vector<UvIsland> sorted = islands;
    std::sort(sorted.begin(), sorted.end(),
              [](const UvIsland& a, const UvIsland& b) {
                  if (a.area3d != b.area3d) return a.area3d > b.area3d;
                  return a.island_id < b.island_id;
              });

    AtlasReport report;
    report.island_count = static_cast<int>(islands.size());
    double total = 0, dropped = 0;
    for (const UvIsland& isl : sorted) total += isl.area3d;

    size_t kept_count = std::min<size_t>(static_cast<size_t>(std::max(k, 0)),
                                         sorted.size());
    std::vector<UvIsland> kept(sorted.begin(), sorted.begin() + kept_count);
    for (size_t i = kept_count; i < sorted.size(); ++i) {
        report.dropped_island_ids.push_back(sorted[i].island_id);
        dropped += sorted[i].area3d;
    }
    std::sort(report.dropped_island_ids.begin(), report.dropped_island_ids.end());
    report.dropped_area_fraction = total > 0 ? dropped / total : 0.0;
    return {std::move(kept), report};
}

// Flags out-of-bounds UV corners and intra-island self-overlap. Overlap
// is detected by rasterizing each island alone over its UV bbox at
// kOverlapRes² and looking for any pixel center covered twice; shared
// edges never double-cover thanks to the rasterizer's fill rule.
// Inter-island overlap is not checked (repacking resolves it).
constexpr int kOverlapRes = 256;

inline AtlasReport validate_atlas(const IndexedMesh& mesh) {
    AtlasReport report;
    for (const Triangle& tri : mesh.triangles) {
        for (const Corner& c : tri) {
            Vec2 uv = mesh.uvs[c.uv];
            if (uv.x < 0 || uv.x > 1 || uv.y < 0 || uv.y > 1)
                ++report.out_of_bounds_uv_count;
        }
    }

    std::vector<UvIsland> islands = extract_islands(mesh);
    report.island_count = static_cast<int>(islands.size());

    std::vector<uint8_t> hits(static_cast<size_t>(kOverlapRes) * kOverlapRes);
    for (const UvIsland& isl : islands) {
        double su = std::max(isl.width(), 1e-12);
        double sv = std::max(isl.height(), 1e-12);
        std::fill(hits.begin(), hits.end(), 0);
        bool overlap = false;
        for (int t : isl.triangle_ids) {
            const Triangle& tri = mesh.triangles[t];
            Vec2 p[3];
            for (int k = 0; k < 3; ++k) {
                Vec2 uv = mesh.uvs[tri[k].uv];
                p[k] = {(uv.x - isl.min_u) / su * kOverlapRes,
                        (uv.y - isl.min_v) / sv * kOverlapRes};
            }
            rasterize_triangle(p[0], p[1], p[2], kOverlapRes, kOverlapRes,
                               [&](int i, int j) {
                                   uint8_t& h = hits[static_cast<size_t>(i) * kOverlapRes + j];
                                   if (h) overlap = true;
                                   if (h < 2) ++h;
                               });
            if (overlap) break;
        }
        if (overlap) {
            report.self_overlap_detected = true;
            break;
        }
    }
    return report;
}

}  // namespace omage
