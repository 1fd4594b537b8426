// core.hpp — shared value types, error codes, deterministic RNG, parallel_for.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace omage {

struct Vec2 {
    double x = 0, y = 0;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double length_sq(Vec3 a) { return dot(a, a); }
inline Vec3 normalize(Vec3 a) {
    double l = length(a);
    return l > 0 ? a * (1.0 / l) : Vec3{0, 0, 0};
}

inline double clamp01(double v) { return v < 0 ? 0 : (v > 1 ? 1 : v); }

// Cross product of (a-o) and (b-o). Sign gives orientation of the triple.
inline double cross2(Vec2 o, Vec2 a, Vec2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

enum class ErrorCode {
    ParseError,
    MissingUv,
    MissingTexture,
    IoError,
    FormatError,
    UnpackableInput,
    TransformMissing,
    DegenerateBounds,
    NotDivisible,
    EmptyImage,
    ZeroArea,
    InvalidConfig,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::MissingUv: return "MissingUv";
        case ErrorCode::MissingTexture: return "MissingTexture";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::UnpackableInput: return "UnpackableInput";
        case ErrorCode::TransformMissing: return "TransformMissing";
        case ErrorCode::DegenerateBounds: return "DegenerateBounds";
        case ErrorCode::NotDivisible: return "NotDivisible";
        case ErrorCode::EmptyImage: return "EmptyImage";
        case ErrorCode::ZeroArea: return "ZeroArea";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

struct Error : std::runtime_error {
    ErrorCode code;
    Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// PCG32. Used instead of <random> distributions so that sampling is
// bit-identical across platforms and standard library versions.
struct Pcg32 {
    uint64_t state = 0x853c49e6748fea9bULL;
    uint64_t inc = 0xda3e39cb94b95bdbULL;

    explicit Pcg32(uint64_t seed = 0, uint64_t seq = 1) {
        state = 0;
        inc = (seq << 1u) | 1u;
        next();
        state += seed;
        next();
    }

    uint32_t next() {
        uint64_t old = state;
        state = old * 6364136223846793005ULL + inc;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    // Uniform double in [0,1) with 53 random bits.
    double next_double() {
        uint64_t hi = next(), lo = next();
        uint64_t r = (hi << 32) | lo;
        return static_cast<double>(r >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    uint32_t next_below(uint32_t n) {
        return static_cast<uint32_t>((static_cast<uint64_t>(next()) * n) >> 32);
    }
};

// Thread cap: OMAGE_THREADS env var, else hardware concurrency.
inline int default_thread_count() {
    if (const char* env = std::getenv("OMAGE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Static partition of [0,n) into contiguous chunks, one per worker.
// The chunk map depends only on n and the worker count, so any
// order-independent body yields thread-count independent results.
template <typename Fn>
void parallel_for(int64_t n, int threads, Fn&& body) {
    if (n <= 0) return;
    if (threads <= 0) threads = default_thread_count();
    int workers = static_cast<int>(std::min<int64_t>(threads, n));
    if (workers <= 1) {
        body(int64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int64_t begin = w * chunk;
        int64_t end = std::min<int64_t>(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

inline void atomic_max_i32(int32_t& slot, int32_t value) {
    std::atomic_ref<int32_t> ref(slot);
    int32_t cur = ref.load(std::memory_order_relaxed);
    while (value > cur && !ref.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

}  // namespace omage
