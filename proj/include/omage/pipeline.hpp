// pipeline.hpp — end-to-end encode orchestration: merge, island
// extraction, top-K selection, packing, baking, pooling, with per-stage
// wall-clock timings.
#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "omage/atlas.hpp"
#include "omage/baker.hpp"
#include "omage/core.hpp"
#include "omage/image.hpp"
#include "omage/mesh.hpp"
#include "omage/packer.hpp"
#include "omage/resampler.hpp"

namespace omage {

struct PipelineConfig {
    int bake_resolution = 1024;
    int low_resolution = 64;
    int max_patches = 64;
    int margin_px = 2;  // in low-res pixels; scaled up for the high-res bake
    int chamfer_samples = 100000;
    uint64_t seed = 0;

    void validate() const {
        if (bake_resolution < 1 || low_resolution < 1 || max_patches < 1 ||
            margin_px < 0 || chamfer_samples < 1)
            throw Error(ErrorCode::InvalidConfig, "config values must be positive");
        if (bake_resolution % low_resolution != 0)
            throw Error(ErrorCode::InvalidConfig,
                        "bake_resolution must be divisible by low_resolution");
    }

    // Margin converted to high-res pixels, so that after pooling the
    // packed islands stay at least margin_px low-res pixels apart.
    int bake_margin_px() const { return margin_px * (bake_resolution / low_resolution); }
};

struct StageTiming {
    std::string name;
    double ms = 0;
};

struct EncodeResult {
    ObjectImage high;
    ObjectImage low;
    NormalizedFrame frame;
    AtlasReport report;
    int kept_islands = 0;
    std::vector<StageTiming> timings;
};

// Runs the full encode. With naive_pooling the low-res omage comes from
// the plain block mean instead of boundary snapping (for comparisons).
inline EncodeResult encode(const IndexedMesh& mesh, const PipelineConfig& cfg,
                           bool naive_pooling = false) {
    cfg.validate();
    using Clock = std::chrono::steady_clock;
    EncodeResult res;
    auto timed = [&res](const char* name, auto&& fn) {
        auto t0 = Clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            res.timings.push_back({name, std::chrono::duration<double, std::milli>(
                                             Clock::now() - t0).count()});
        } else {
            auto value = fn();
            res.timings.push_back({name, std::chrono::duration<double, std::milli>(
                                             Clock::now() - t0).count()});
            return value;
        }
    };

    IndexedMesh merged = timed("merge", [&] {
        return merge_coincident_vertices(mesh, default_eps3d(mesh), kDefaultEpsUv);
    });
    std::vector<UvIsland> islands = timed("islands", [&] { return extract_islands(merged); });
    AtlasReport validation = timed("validate", [&] { return validate_atlas(merged); });

    auto [kept, report] = select_top_k(islands, cfg.max_patches);
    report.self_overlap_detected = validation.self_overlap_detected;
    report.out_of_bounds_uv_count = validation.out_of_bounds_uv_count;
    res.report = report;
    res.kept_islands = static_cast<int>(kept.size());

    std::vector<IslandTransform> transforms = timed("pack", [&] {
        return pack_aabb(kept, cfg.bake_margin_px(), cfg.bake_resolution);
    });

    auto baked = timed("bake", [&] {
        return bake(merged, kept, transforms, merged.material.get(), cfg.bake_resolution);
    });
    res.high = std::move(baked.first);
    res.frame = baked.second;

    res.low = timed("pool", [&] {
        return naive_pooling ? naive_pool(res.high, cfg.low_resolution)
                             : sparse_pool(res.high, cfg.low_resolution);
    });
    return res;
}

}  // namespace omage
