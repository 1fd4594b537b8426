// omg_io.hpp — OMG1 container read/write and PNG previews.
//
// Layout (little-endian):
//   bytes 0..3   magic "OMG1"
//   bytes 4..7   u32 resolution R
//   bytes 8..11  u32 channel count (always 12)
//   bytes 12..15 reserved, zero
//   then R*R*12 IEEE-754 32-bit floats, row-major, channel-interleaved.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "omage/image.hpp"
#include "omage/png_io.hpp"

namespace omage {

namespace detail {

inline void put_u32_le(std::vector<uint8_t>& buf, uint32_t v) {
    buf.push_back(static_cast<uint8_t>(v & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    buf.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

inline uint32_t get_u32_le(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline std::vector<uint8_t> serialize_omage(const ObjectImage& img) {
    std::vector<uint8_t> buf;
    buf.reserve(16 + img.channels.size() * 4);
    buf.push_back('O');
    buf.push_back('M');
    buf.push_back('G');
    buf.push_back('1');
    detail::put_u32_le(buf, static_cast<uint32_t>(img.resolution));
    detail::put_u32_le(buf, static_cast<uint32_t>(kChannels));
    detail::put_u32_le(buf, 0u);
    for (float f : img.channels) detail::put_u32_le(buf, std::bit_cast<uint32_t>(f));
    return buf;
}

inline void write_omage(const ObjectImage& img, const std::string& path) {
    std::vector<uint8_t> buf = serialize_omage(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

inline ObjectImage parse_omage(const std::vector<uint8_t>& buf, const std::string& origin) {
    if (buf.size() < 16 || std::memcmp(buf.data(), "OMG1", 4) != 0)
        throw Error(ErrorCode::FormatError, "bad magic in " + origin);
    uint32_t r = detail::get_u32_le(buf.data() + 4);
    uint32_t nchan = detail::get_u32_le(buf.data() + 8);
    if (nchan != static_cast<uint32_t>(kChannels))
        throw Error(ErrorCode::FormatError,
                    "unsupported channel count " + std::to_string(nchan) + " in " + origin);
    if (r == 0 || r > (1u << 16))
        throw Error(ErrorCode::FormatError, "bad resolution in " + origin);
    size_t expected = 16 + static_cast<size_t>(r) * r * kChannels * 4;
    if (buf.size() != expected)
        throw Error(ErrorCode::FormatError,
                    "payload size mismatch in " + origin + ": got " +
                        std::to_string(buf.size()) + " bytes, expected " +
                        std::to_string(expected));
    ObjectImage img(static_cast<int>(r));
    const uint8_t* p = buf.data() + 16;
    for (size_t k = 0; k < img.channels.size(); ++k, p += 4)
        img.channels[k] = std::bit_cast<float>(detail::get_u32_le(p));
    return img;
}

inline ObjectImage read_omage(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    return parse_omage(buf, path);
}

// Writes geometry.png, albedo.png and normal.png into dir. Position xyz
// maps to RGB; unoccupied pixels are black in all three previews.
inline void write_previews(const ObjectImage& img, const std::string& dir) {
    int r = img.resolution;
    std::vector<uint8_t> geometry(static_cast<size_t>(r) * r * 3, 0);
    std::vector<uint8_t> albedo(geometry.size(), 0);
    std::vector<uint8_t> normal(geometry.size(), 0);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            if (!img.occupied(i, j)) continue;
            size_t o = (static_cast<size_t>(i) * r + j) * 3;
            geometry[o + 0] = quantize8(img.at(i, j, kPosX));
            geometry[o + 1] = quantize8(img.at(i, j, kPosY));
            geometry[o + 2] = quantize8(img.at(i, j, kPosZ));
            albedo[o + 0] = quantize8(img.at(i, j, kAlbedoR));
            albedo[o + 1] = quantize8(img.at(i, j, kAlbedoG));
            albedo[o + 2] = quantize8(img.at(i, j, kAlbedoB));
            normal[o + 0] = quantize8(img.at(i, j, kNormX));
            normal[o + 1] = quantize8(img.at(i, j, kNormY));
            normal[o + 2] = quantize8(img.at(i, j, kNormZ));
        }
    }
    std::string base = dir.empty() || dir.back() == '/' ? dir : dir + "/";
    write_png(base + "geometry.png", r, r, 3, geometry.data());
    write_png(base + "albedo.png", r, r, 3, albedo.data());
    write_png(base + "normal.png", r, r, 3, normal.data());
}

}  // namespace omage
