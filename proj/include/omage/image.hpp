// image.hpp — the 12-channel object image (R x R x 12 float grid).
#pragma once

#include <cstdint>
#include <vector>

#include "omage/core.hpp"

namespace omage {

// Channel layout, row-major and channel-interleaved:
//   [px, py, pz, alpha, nx, ny, nz, ar, ag, ab, metal, rough]
enum Channel : int {
    kPosX = 0,
    kPosY = 1,
    kPosZ = 2,
    kAlpha = 3,
    kNormX = 4,
    kNormY = 5,
    kNormZ = 6,
    kAlbedoR = 7,
    kAlbedoG = 8,
    kAlbedoB = 9,
    kMetal = 10,
    kRough = 11,
};

constexpr int kChannels = 12;

// Pixel (i,j): i is the row (v axis), j is the column (u axis); the
// pixel center sits at uv = ((j+0.5)/R, (i+0.5)/R). Alpha is exactly
// 0 or 1 and every other channel of an unoccupied pixel is 0.
struct ObjectImage {
    int resolution = 0;
    std::vector<float> channels;  // resolution * resolution * kChannels

    ObjectImage() = default;
    explicit ObjectImage(int r)
        : resolution(r),
          channels(static_cast<size_t>(r) * r * kChannels, 0.0f) {}

    float& at(int i, int j, int c) {
        return channels[(static_cast<size_t>(i) * resolution + j) * kChannels + c];
    }
    float at(int i, int j, int c) const {
        return channels[(static_cast<size_t>(i) * resolution + j) * kChannels + c];
    }
    bool occupied(int i, int j) const { return at(i, j, kAlpha) != 0.0f; }

    size_t pixel_count() const {
        return static_cast<size_t>(resolution) * resolution;
    }
};

inline double occupancy_ratio(const ObjectImage& img) {
    if (img.resolution == 0) return 0.0;
    size_t n = 0;
    for (int i = 0; i < img.resolution; ++i)
        for (int j = 0; j < img.resolution; ++j)
            if (img.occupied(i, j)) ++n;
    return static_cast<double>(n) / static_cast<double>(img.pixel_count());
}

}  // namespace omage
