// resampler.hpp — block-pooled downsampling of an omage, either with
// boundary snapping (sparse pooling over contour pixels) or the naive
// occupied-mean baseline.
#pragma once

#include <vector>

#include "omage/core.hpp"
#include "omage/image.hpp"

namespace omage {

struct BoundaryMask {
    int resolution = 0;
    std::vector<uint8_t> mask;  // resolution * resolution

    bool at(int i, int j) const {
        return mask[static_cast<size_t>(i) * resolution + j] != 0;
    }
};

// A pixel is boundary iff it is occupied and at least one 4-neighbor is
// unoccupied or outside the image.
inline BoundaryMask detect_boundary(const ObjectImage& img) {
    const int R = img.resolution;
    BoundaryMask out;
    out.resolution = R;
    out.mask.assign(static_cast<size_t>(R) * R, 0);
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < R; ++j) {
            if (!img.occupied(i, j)) continue;
            bool edge = i == 0 || i == R - 1 || j == 0 || j == R - 1 ||
                        !img.occupied(i - 1, j) || !img.occupied(i + 1, j) ||
                        !img.occupied(i, j - 1) || !img.occupied(i, j + 1);
            if (edge) out.mask[static_cast<size_t>(i) * R + j] = 1;
        }
    }
    return out;
}

namespace detail {

enum class PoolMode { kSparse, kNaive };

inline ObjectImage pool(const ObjectImage& img, int r_low, PoolMode mode, double tau) {
    const int R = img.resolution;
    if (r_low < 1 || R % r_low != 0)
        throw Error(ErrorCode::NotDivisible,
                    "resolution " + std::to_string(R) + " is not divisible by " +
                        std::to_string(r_low));
    const int B = R / r_low;

    BoundaryMask boundary;
    if (mode == PoolMode::kSparse) boundary = detect_boundary(img);

    ObjectImage out(r_low);
    for (int bi = 0; bi < r_low; ++bi) {
        for (int bj = 0; bj < r_low; ++bj) {
            double sum[kChannels] = {};
            int occ_cnt = 0, bnd_cnt = 0;
            // Row-major accumulation in doubles: a fixed summation
            // order keeps the result independent of scheduling.
            for (int di = 0; di < B; ++di) {
                for (int dj = 0; dj < B; ++dj) {
                    int i = bi * B + di, j = bj * B + dj;
                    if (!img.occupied(i, j)) continue;
                    ++occ_cnt;
                    bool use;
                    if (mode == PoolMode::kNaive) {
                        use = true;
                    } else if (bnd_cnt == 0 && boundary.at(i, j)) {
                        // First boundary pixel found: discard interior sums.
                        for (double& s : sum) s = 0;
                        use = true;
                    } else if (bnd_cnt > 0) {
                        use = boundary.at(i, j);
                    } else {
                        use = true;  // interior-only so far
                    }
                    if (mode == PoolMode::kSparse && boundary.at(i, j)) ++bnd_cnt;
                    if (use)
                        for (int c = 0; c < kChannels; ++c)
                            sum[c] += img.at(i, j, c);
                }
            }
            int denom = mode == PoolMode::kSparse && bnd_cnt > 0 ? bnd_cnt : occ_cnt;
            double frac = static_cast<double>(occ_cnt) / (B * B);
            bool alpha = occ_cnt > 0 && frac >= tau;
            if (!alpha || denom == 0) continue;  // pixel stays all-zero
            for (int c = 0; c < kChannels; ++c) {
                if (c == kAlpha) continue;
                out.at(bi, bj, c) = static_cast<float>(sum[c] / denom);
            }
            out.at(bi, bj, kAlpha) = 1.0f;
        }
    }
    return out;
}

}  // namespace detail

// Boundary-snapping pooling: per (R/r_low)² block, average only the
// boundary pixels when the block has any; otherwise average the
// occupied pixels; empty blocks stay zero. The low-res pixel is
// occupied iff the block's occupied fraction reaches tau (tau = 0
// means any occupancy).
inline ObjectImage sparse_pool(const ObjectImage& img, int r_low, double tau = 0.0) {
    return detail::pool(img, r_low, detail::PoolMode::kSparse, tau);
}

// Baseline: plain mean over occupied pixels for every channel.
inline ObjectImage naive_pool(const ObjectImage& img, int r_low, double tau = 0.0) {
    return detail::pool(img, r_low, detail::PoolMode::kNaive, tau);
}

}  // namespace omage
