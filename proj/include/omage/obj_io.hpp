// obj_io.hpp — Wavefront OBJ/MTL subset: v, vt, f (p/t and p/t/n), mtllib,
// usemtl; MTL map_Kd / map_Bump / norm / map_Pm / map_Pr with PNG payloads.
#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "omage/mesh.hpp"
#include "omage/png_io.hpp"

namespace omage {

using WarnFn = std::function<void(const std::string&)>;

namespace detail {

inline std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline double parse_double(std::string_view tok, int line, const char* what) {
    // strtod wants a terminated buffer; tokens are short so copy is fine.
    std::string buf(tok);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0')
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": bad " + what + " '" + buf + "'");
    return v;
}

inline long parse_long(std::string_view tok, int line, const char* what) {
    long v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": bad " + what + " '" +
                        std::string(tok) + "'");
    return v;
}

// OBJ indices are 1-based; negative values are relative to the current
// array size. Returns a 0-based index.
inline int resolve_index(long raw, size_t count, int line, const char* what) {
    long idx = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
    if (raw == 0 || idx < 0 || idx >= static_cast<long>(count))
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what +
                                               " index " + std::to_string(raw) +
                                               " out of range");
    return static_cast<int>(idx);
}

inline std::string dir_of(const std::string& path) {
    size_t pos = path.find_last_of("/\\");
    return pos == std::string::npos ? std::string() : path.substr(0, pos + 1);
}

inline bool load_texture_map(const std::string& base_dir, const std::string& name,
                             int want_channels, bool srgb, Texture& out, const WarnFn& warn) {
    std::string path = base_dir + name;
    PngImage png;
    try {
        png = read_png(path);
    } catch (const Error& e) {
        if (warn) warn("texture '" + name + "' unavailable, using defaults (" + e.what() + ")");
        return false;
    }
    out.width = png.width;
    out.height = png.height;
    out.channels = want_channels;
    out.data.resize(static_cast<size_t>(png.width) * png.height * want_channels);
    size_t n = static_cast<size_t>(png.width) * png.height;
    for (size_t p = 0; p < n; ++p) {
        for (int c = 0; c < want_channels; ++c) {
            // Gray source replicates; RGB source feeding a scalar map takes red.
            int src_c = png.channels == 1 ? 0 : std::min(c, png.channels - 1);
            double v = png.pixels[p * png.channels + src_c] / 255.0;
            if (srgb) v = srgb_to_linear(v);
            out.data[p * want_channels + c] = static_cast<float>(v);
        }
    }
    return true;
}

struct MtlMaps {
    std::string albedo, normal, metalness, roughness;
};

inline std::unordered_map<std::string, MtlMaps> parse_mtl(const std::string& path,
                                                          std::string* first_name) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open material library " + path);
    std::unordered_map<std::string, MtlMaps> mats;
    std::string current;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = split_ws(trim_view(line));
        if (toks.empty() || toks[0][0] == '#') continue;
        std::string key(toks[0]);
        if (key == "newmtl" && toks.size() >= 2) {
            current = std::string(toks[1]);
            if (first_name && first_name->empty()) *first_name = current;
            mats[current];
        } else if (!current.empty() && toks.size() >= 2) {
            std::string value(toks.back());  // map statements may carry options; file is last
            if (key == "map_Kd") mats[current].albedo = value;
            else if (key == "map_Bump" || key == "bump" || key == "norm")
                mats[current].normal = value;
            else if (key == "map_Pm") mats[current].metalness = value;
            else if (key == "map_Pr") mats[current].roughness = value;
        }
    }
    return mats;
}

}  // namespace detail

// Loads an OBJ file. Faces with more than three corners are fan
// triangulated. Every corner must carry a vt index; corners without one
// raise MissingUv. Referenced textures that fail to load degrade to the
// material defaults with a warning rather than failing the parse.
inline IndexedMesh load_obj(const std::string& path, const WarnFn& warn = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

    IndexedMesh mesh;
    std::string base_dir = detail::dir_of(path);
    std::string mtllib_path;
    std::string first_usemtl;
    std::string line;
    int line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::split_ws(detail::trim_view(line));
        if (toks.empty() || toks[0][0] == '#') continue;
        std::string_view rec = toks[0];

        if (rec == "v") {
            if (toks.size() < 4)
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": v needs 3 coordinates");
            mesh.positions.push_back({detail::parse_double(toks[1], line_no, "v.x"),
                                      detail::parse_double(toks[2], line_no, "v.y"),
                                      detail::parse_double(toks[3], line_no, "v.z")});
        } else if (rec == "vt") {
            if (toks.size() < 3)
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": vt needs 2 coordinates");
            mesh.uvs.push_back({detail::parse_double(toks[1], line_no, "vt.u"),
                                detail::parse_double(toks[2], line_no, "vt.v")});
        } else if (rec == "f") {
            if (toks.size() < 4)
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line_no) + ": f needs 3+ corners");
            std::vector<Corner> corners;
            corners.reserve(toks.size() - 1);
            for (size_t t = 1; t < toks.size(); ++t) {
                std::string_view item = toks[t];
                size_t s1 = item.find('/');
                if (s1 == std::string_view::npos || s1 + 1 >= item.size() || item[s1 + 1] == '/')
                    throw Error(ErrorCode::MissingUv,
                                "line " + std::to_string(line_no) +
                                    ": face corner lacks a vt index (UVs are required)");
                size_t s2 = item.find('/', s1 + 1);
                std::string_view p_tok = item.substr(0, s1);
                std::string_view t_tok = s2 == std::string_view::npos
                                             ? item.substr(s1 + 1)
                                             : item.substr(s1 + 1, s2 - s1 - 1);
                long p_raw = detail::parse_long(p_tok, line_no, "position");
                long t_raw = detail::parse_long(t_tok, line_no, "uv");
                Corner c;
                c.pos = detail::resolve_index(p_raw, mesh.positions.size(), line_no, "position");
                c.uv = detail::resolve_index(t_raw, mesh.uvs.size(), line_no, "uv");
                corners.push_back(c);
                // normal index (after s2) is accepted and ignored
            }
            for (size_t t = 1; t + 1 < corners.size(); ++t)
                mesh.triangles.push_back({corners[0], corners[t], corners[t + 1]});
        } else if (rec == "mtllib" && toks.size() >= 2) {
            mtllib_path = base_dir + std::string(toks[1]);
        } else if (rec == "usemtl" && toks.size() >= 2) {
            if (first_usemtl.empty()) first_usemtl = std::string(toks[1]);
        }
        // vn, o, g, s and friends are accepted and ignored
    }

    for (const Triangle& tri : mesh.triangles) {
        if (tri[0].pos == tri[1].pos || tri[1].pos == tri[2].pos || tri[0].pos == tri[2].pos)
            throw Error(ErrorCode::ParseError, "degenerate face with repeated position index");
    }

    if (!mtllib_path.empty()) {
        std::unordered_map<std::string, detail::MtlMaps> mats;
        std::string first_newmtl;
        try {
            mats = detail::parse_mtl(mtllib_path, &first_newmtl);
        } catch (const Error& e) {
            if (warn) warn(std::string("material library unavailable, using defaults (") +
                           e.what() + ")");
        }
        const detail::MtlMaps* chosen = nullptr;
        std::string wanted = !first_usemtl.empty() ? first_usemtl : first_newmtl;
        if (!wanted.empty()) {
            auto it = mats.find(wanted);
            if (it != mats.end()) chosen = &it->second;
        }
        if (chosen) {
            auto material = std::make_shared<MaterialSet>();
            Texture tex;
            if (!chosen->albedo.empty() &&
                detail::load_texture_map(base_dir, chosen->albedo, 3, true, tex, warn))
                material->albedo = std::move(tex);
            if (!chosen->normal.empty() &&
                detail::load_texture_map(base_dir, chosen->normal, 3, false, tex, warn))
                material->normal = std::move(tex);
            if (!chosen->metalness.empty() &&
                detail::load_texture_map(base_dir, chosen->metalness, 1, false, tex, warn))
                material->metalness = std::move(tex);
            if (!chosen->roughness.empty() &&
                detail::load_texture_map(base_dir, chosen->roughness, 1, false, tex, warn))
                material->roughness = std::move(tex);
            mesh.material = std::move(material);
        }
    }
    return mesh;
}

// Writes v/vt/vn/f records. Corner layout in the output is p/t when
// normals is empty and p/t/n (parallel to positions) otherwise.
inline void save_obj(const std::string& path, const std::vector<Vec3>& positions,
                     const std::vector<Vec2>& uvs, const std::vector<Triangle>& triangles,
                     const std::vector<Vec3>& normals = {}) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out.precision(9);
    for (Vec3 p : positions) out << "v " << p.x << ' ' << p.y << ' ' << p.z << '\n';
    for (Vec2 t : uvs) out << "vt " << t.x << ' ' << t.y << '\n';
    for (Vec3 n : normals) out << "vn " << n.x << ' ' << n.y << ' ' << n.z << '\n';
    for (const Triangle& tri : triangles) {
        out << 'f';
        for (const Corner& c : tri) {
            out << ' ' << c.pos + 1 << '/' << c.uv + 1;
            if (!normals.empty()) out << '/' << c.pos + 1;
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace omage
