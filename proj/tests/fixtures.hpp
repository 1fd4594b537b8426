// fixtures.hpp — synthetic meshes and omages shared by the test suite.
#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "omage/omage.hpp"

namespace fixtures {

using namespace omage;

constexpr double kPi = 3.14159265358979323846;

using SurfaceFn = std::function<Vec3(double, double)>;

// Appends one rectangular grid chart: nx-by-ny cells, chart parameters
// (s,t) in [0,1]^2 mapped to the given uv rectangle, 3D positions from
// surface(s,t). Vertices are indexed within the chart; nothing is shared
// with previously added charts.
inline void add_grid_chart(IndexedMesh& mesh, int nx, int ny, Vec2 uv_min, Vec2 uv_max,
                           const SurfaceFn& surface) {
    const int base = static_cast<int>(mesh.positions.size());
    const int base_uv = static_cast<int>(mesh.uvs.size());
    for (int b = 0; b <= ny; ++b) {
        for (int a = 0; a <= nx; ++a) {
            const double s = static_cast<double>(a) / nx;
            const double t = static_cast<double>(b) / ny;
            mesh.positions.push_back(surface(s, t));
            mesh.uvs.push_back({uv_min.x + (uv_max.x - uv_min.x) * s,
                                uv_min.y + (uv_max.y - uv_min.y) * t});
        }
    }
    auto corner = [&](int a, int b) {
        const int k = b * (nx + 1) + a;
        return Corner{base + k, base_uv + k};
    };
    for (int b = 0; b < ny; ++b) {
        for (int a = 0; a < nx; ++a) {
            const Corner c00 = corner(a, b), c10 = corner(a + 1, b);
            const Corner c01 = corner(a, b + 1), c11 = corner(a + 1, b + 1);
            mesh.triangles.push_back({c00, c10, c11});
            mesh.triangles.push_back({c00, c11, c01});
        }
    }
}

// Rescales positions so the referenced bounding box starts at the origin
// and its longest extent is exactly 1.
inline void fit_unit_bbox(IndexedMesh& mesh) {
    const Bbox3 box = referenced_bounds(mesh);
    const Vec3 e = box.extent();
    const double longest = std::max(e.x, std::max(e.y, e.z));
    if (longest <= 0.0) return;
    const double s = 1.0 / longest;
    for (Vec3& p : mesh.positions) p = (p - box.min) * s;
}

inline double total_area(const IndexedMesh& mesh) {
    double a = 0.0;
    for (const Triangle& t : mesh.triangles) a += triangle_area3d(mesh, t);
    return a;
}

// --- fidelity suite -------------------------------------------------------

// A single tilted planar chart.
inline IndexedMesh plane_single() {
    IndexedMesh m;
    const Vec3 ex = normalize({0.9, 0.1, 0.3});
    const Vec3 ey = normalize({-0.2, 0.95, 0.1});
    add_grid_chart(m, 24, 24, {0.02, 0.02}, {0.98, 0.98}, [&](double s, double t) {
        return Vec3{0.1, 0.1, 0.2} + ex * s + ey * (0.8 * t);
    });
    fit_unit_bbox(m);
    return m;
}

// The same plane split into two charts; the seam duplicates positions but
// not uvs, so the halves stay separate islands.
inline IndexedMesh plane_two_halves() {
    IndexedMesh m;
    auto surf = [](double x, double t) { return Vec3{x, t * 0.9, 0.3 + 0.2 * x}; };
    add_grid_chart(m, 12, 24, {0.02, 0.02}, {0.47, 0.98},
                   [&](double s, double t) { return surf(0.5 * s, t); });
    add_grid_chart(m, 12, 24, {0.53, 0.02}, {0.98, 0.98},
                   [&](double s, double t) { return surf(0.5 + 0.5 * s, t); });
    fit_unit_bbox(m);
    return m;
}

// A closed box, one chart per face.
inline IndexedMesh box_per_face() {
    IndexedMesh m;
    const double dx = 1.0, dy = 0.55, dz = 0.28;
    struct Face {
        Vec3 origin, eu, ev;
    };
    const std::vector<Face> faces = {
        {{0, 0, 0}, {dx, 0, 0}, {0, dy, 0}},    // bottom
        {{0, 0, dz}, {0, dy, 0}, {dx, 0, 0}},   // top
        {{0, 0, 0}, {0, 0, dz}, {dx, 0, 0}},    // front
        {{0, dy, 0}, {dx, 0, 0}, {0, 0, dz}},   // back
        {{0, 0, 0}, {0, dy, 0}, {0, 0, dz}},    // left
        {{dx, 0, 0}, {0, 0, dz}, {0, dy, 0}},   // right
    };
    for (int f = 0; f < 6; ++f) {
        const int col = f % 3, row = f / 3;
        const Vec2 lo{col / 3.0 + 0.01, row / 2.0 + 0.01};
        const Vec2 hi{(col + 1) / 3.0 - 0.01, (row + 1) / 2.0 - 0.01};
        add_grid_chart(m, 10, 10, lo, hi, [&](double s, double t) {
            return faces[f].origin + faces[f].eu * s + faces[f].ev * t;
        });
    }
    fit_unit_bbox(m);
    return m;
}

// An open cylinder unwrapped into a single chart.
inline IndexedMesh open_cylinder() {
    IndexedMesh m;
    const double r = 0.3;
    add_grid_chart(m, 48, 12, {0.02, 0.02}, {0.98, 0.98}, [&](double s, double t) {
        const double a = 2.0 * kPi * s;
        return Vec3{0.5 + r * std::cos(a), 0.5 + r * std::sin(a), t};
    });
    fit_unit_bbox(m);
    return m;
}

// The same cylinder split into two half-shell charts.
inline IndexedMesh cylinder_two_charts() {
    IndexedMesh m;
    const double r = 0.3;
    auto shell = [&](double a0) {
        return [=](double s, double t) {
            const double a = a0 + kPi * s;
            return Vec3{0.5 + r * std::cos(a), 0.5 + r * std::sin(a), t};
        };
    };
    add_grid_chart(m, 24, 12, {0.02, 0.02}, {0.47, 0.98}, shell(0.0));
    add_grid_chart(m, 24, 12, {0.53, 0.02}, {0.98, 0.98}, shell(kPi));
    fit_unit_bbox(m);
    return m;
}

// Two stacked soft plates: a seat and a smaller cushion hovering above it.
inline IndexedMesh cushion_on_seat() {
    IndexedMesh m;
    add_grid_chart(m, 20, 20, {0.02, 0.02}, {0.55, 0.55}, [](double s, double t) {
        const double z = 0.08 * std::sin(kPi * s) * std::sin(kPi * t);
        return Vec3{s, 0.85 * t, 0.05 + z};
    });
    add_grid_chart(m, 16, 16, {0.6, 0.02}, {0.98, 0.4}, [](double s, double t) {
        const double z = 0.1 * std::sin(kPi * s) * std::sin(kPi * t);
        return Vec3{0.2 + 0.6 * s, 0.15 + 0.5 * t, 0.3 + z};
    });
    fit_unit_bbox(m);
    return m;
}

// Two coplanar plates separated by a gap along x; one chart per plate.
inline IndexedMesh two_patch_gap(double gap = 0.04) {
    IndexedMesh m;
    const double half = 0.5 - gap / 2.0;
    add_grid_chart(m, 12, 10, {0.02, 0.02}, {0.45, 0.62}, [&](double s, double t) {
        return Vec3{half * s, 0.6 * t, 0.5};
    });
    add_grid_chart(m, 12, 10, {0.55, 0.02}, {0.98, 0.62}, [&](double s, double t) {
        return Vec3{0.5 + gap / 2.0 + half * s, 0.6 * t, 0.5};
    });
    fit_unit_bbox(m);
    return m;
}

// A four-step staircase swept along y, one chart.
inline IndexedMesh staircase() {
    IndexedMesh m;
    const int steps = 4;
    const double tread = 0.25, riser = 0.18;
    add_grid_chart(m, 64, 8, {0.02, 0.02}, {0.98, 0.98}, [&](double s, double t) {
        const double u = s * steps;
        const int k = std::min(static_cast<int>(u), steps - 1);
        const double f = u - k;
        double x, z;
        if (f < 0.5) {  // tread
            x = k * tread + f * 2.0 * tread;
            z = k * riser;
        } else {  // riser
            x = (k + 1) * tread;
            z = (k + (f - 0.5) * 2.0) * riser;
        }
        return Vec3{x, 0.8 * t, z};
    });
    fit_unit_bbox(m);
    return m;
}

// Five square plates of decreasing size at staggered heights.
inline IndexedMesh multi_plates() {
    IndexedMesh m;
    const double sides[5] = {0.9, 0.7, 0.5, 0.35, 0.25};
    const double cx[5] = {0.5, 0.35, 0.65, 0.3, 0.7};
    const double cy[5] = {0.5, 0.6, 0.35, 0.3, 0.7};
    for (int k = 0; k < 5; ++k) {
        const double h = sides[k] / 2.0;
        const Vec2 lo{(k % 3) / 3.0 + 0.01, (k / 3) / 2.0 + 0.01};
        const Vec2 hi{(k % 3 + 1) / 3.0 - 0.01, (k / 3 + 1) / 2.0 - 0.01};
        const double z = 0.1 + 0.18 * k;
        add_grid_chart(m, 8, 8, lo, hi, [=](double s, double t) {
            return Vec3{cx[k] - h + sides[k] * s, cy[k] - h + sides[k] * t, z};
        });
    }
    fit_unit_bbox(m);
    return m;
}

// A smooth sine bump heightfield, one chart.
inline IndexedMesh bump_field() {
    IndexedMesh m;
    add_grid_chart(m, 32, 32, {0.02, 0.02}, {0.98, 0.98}, [](double s, double t) {
        return Vec3{s, t, 0.25 * std::sin(kPi * s) * std::sin(kPi * t)};
    });
    fit_unit_bbox(m);
    return m;
}

inline std::vector<std::pair<std::string, IndexedMesh>> fidelity_suite() {
    return {
        {"plane_single", plane_single()},
        {"plane_two_halves", plane_two_halves()},
        {"box_per_face", box_per_face()},
        {"open_cylinder", open_cylinder()},
        {"cylinder_two_charts", cylinder_two_charts()},
        {"cushion_on_seat", cushion_on_seat()},
        {"two_patch_gap", two_patch_gap()},
        {"staircase", staircase()},
        {"multi_plates", multi_plates()},
        {"bump_field", bump_field()},
    };
}

// --- part-count sweep fixture ---------------------------------------------

// `count` square plates scattered in the unit cube with geometrically
// decreasing areas, one chart each.
inline IndexedMesh many_parts(int count, uint64_t seed = 42) {
    IndexedMesh m;
    Pcg32 rng(seed);
    const double ratio = 0.93;
    double side = 0.3;
    for (int k = 0; k < count; ++k) {
        const double cx = 0.1 + 0.8 * rng.next_double();
        const double cy = 0.1 + 0.8 * rng.next_double();
        const double cz = 0.05 + 0.9 * rng.next_double();
        const double h = side / 2.0;
        // All charts share the unit uv square; islands may overlap in uv
        // before repacking.
        add_grid_chart(m, 2, 2, {0.0, 0.0}, {1.0, 1.0}, [=](double s, double t) {
            return Vec3{cx - h + side * s, cy - h + side * t, cz};
        });
        side *= std::sqrt(ratio);
    }
    fit_unit_bbox(m);
    return m;
}

// --- throughput fixture -----------------------------------------------------

// Writes a ~51k-triangle textured mesh (16 charts of 40x40 cells) plus its
// mtl and png maps into `dir`; returns the obj path.
inline std::string write_big_textured(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    IndexedMesh m;
    for (int f = 0; f < 16; ++f) {
        const int col = f % 4, row = f / 4;
        const Vec2 lo{col / 4.0 + 0.005, row / 4.0 + 0.005};
        const Vec2 hi{(col + 1) / 4.0 - 0.005, (row + 1) / 4.0 - 0.005};
        const double x0 = col * 0.25, y0 = row * 0.25;
        add_grid_chart(m, 40, 40, lo, hi, [=](double s, double t) {
            const double z = 0.05 * std::sin(2.0 * kPi * (s + f * 0.13)) *
                             std::cos(2.0 * kPi * (t - f * 0.07));
            return Vec3{x0 + 0.23 * s, y0 + 0.23 * t, 0.5 + z};
        });
    }
    fit_unit_bbox(m);

    {
        std::vector<uint8_t> albedo(512 * 512 * 3);
        for (int y = 0; y < 512; ++y) {
            for (int x = 0; x < 512; ++x) {
                const bool check = ((x / 32) + (y / 32)) % 2 == 0;
                uint8_t* px = &albedo[(y * 512 + x) * 3];
                px[0] = static_cast<uint8_t>(x / 2);
                px[1] = check ? 200 : 60;
                px[2] = static_cast<uint8_t>(y / 2);
            }
        }
        write_png(dir + "/albedo.png", 512, 512, 3, albedo.data());

        std::vector<uint8_t> gray(256 * 256);
        for (int y = 0; y < 256; ++y)
            for (int x = 0; x < 256; ++x)
                gray[y * 256 + x] = static_cast<uint8_t>((x + y) / 2);
        write_png(dir + "/metal.png", 256, 256, 1, gray.data());
        for (int y = 0; y < 256; ++y)
            for (int x = 0; x < 256; ++x)
                gray[y * 256 + x] = static_cast<uint8_t>((x / 16) % 2 ? 220 : 40);
        write_png(dir + "/rough.png", 256, 256, 1, gray.data());
    }

    {
        std::ofstream mtl(dir + "/big.mtl");
        mtl << "newmtl main\n"
            << "map_Kd albedo.png\n"
            << "map_Pm metal.png\n"
            << "map_Pr rough.png\n";
    }

    const std::string obj_path = dir + "/big.obj";
    {
        std::ofstream obj(obj_path);
        obj << "mtllib big.mtl\nusemtl main\n";
        char buf[128];
        for (const Vec3& p : m.positions) {
            std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
            obj << buf;
        }
        for (const Vec2& t : m.uvs) {
            std::snprintf(buf, sizeof buf, "vt %.9g %.9g\n", t.x, t.y);
            obj << buf;
        }
        for (const Triangle& t : m.triangles) {
            obj << "f " << t[0].pos + 1 << '/' << t[0].uv + 1 << ' ' << t[1].pos + 1 << '/'
                << t[1].uv + 1 << ' ' << t[2].pos + 1 << '/' << t[2].uv + 1 << '\n';
        }
    }
    return obj_path;
}

// --- omage fixtures ---------------------------------------------------------

// A random but invariant-respecting omage: occupancy by coin flip, occupied
// pixels get uniform channel values.
inline ObjectImage random_omage(Pcg32& rng, int resolution, double density = 0.5) {
    ObjectImage img(resolution);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            if (rng.next_double() >= density) continue;
            img.at(i, j, kAlpha) = 1.0f;
            for (int c = 0; c < kChannels; ++c) {
                if (c == kAlpha) continue;
                img.at(i, j, c) = static_cast<float>(rng.next_double());
            }
        }
    }
    return img;
}

// Two square patches of planar geometry separated by a pixel gap along
// columns. Positions encode the in-plane pixel-center coordinates so pooling
// acts on real plate geometry.
inline ObjectImage two_squares_omage(int resolution, int row0, int col0, int size, int gap) {
    ObjectImage img(resolution);
    auto fill = [&](int r0, int c0) {
        for (int i = r0; i < r0 + size; ++i) {
            for (int j = c0; j < c0 + size; ++j) {
                img.at(i, j, kAlpha) = 1.0f;
                img.at(i, j, kPosX) = static_cast<float>((j + 0.5) / resolution);
                img.at(i, j, kPosY) = static_cast<float>((i + 0.5) / resolution);
                img.at(i, j, kPosZ) = 0.5f;
                img.at(i, j, kNormX) = 0.5f;
                img.at(i, j, kNormY) = 0.5f;
                img.at(i, j, kNormZ) = 1.0f;
                img.at(i, j, kAlbedoR) = 0.8f;
                img.at(i, j, kAlbedoG) = 0.8f;
                img.at(i, j, kAlbedoB) = 0.8f;
                img.at(i, j, kRough) = 0.5f;
            }
        }
    };
    fill(row0, col0);
    fill(row0, col0 + size + gap);
    return img;
}

}  // namespace fixtures
