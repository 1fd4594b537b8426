// omage_cli — encode/decode/downsample/analyze/roundtrip driver around
// the omage library. All subcommands exit 0 on success, 2 on input or
// parse errors, 3 on pipeline errors, 4 on I/O errors, and print a
// machine-readable error JSON on stdout when they fail.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "omage/omage.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(omage::ErrorCode c) {
    switch (c) {
        case omage::ErrorCode::ParseError:
        case omage::ErrorCode::MissingUv:
        case omage::ErrorCode::MissingTexture:
        case omage::ErrorCode::FormatError:
        case omage::ErrorCode::InvalidConfig:
            return 2;
        case omage::ErrorCode::IoError:
            return 4;
        default:
            return 3;  // pipeline errors
    }
}

json to_json(const omage::AtlasReport& r) {
    return json{{"island_count", r.island_count},
                {"dropped_island_ids", r.dropped_island_ids},
                {"dropped_area_fraction", r.dropped_area_fraction},
                {"self_overlap_detected", r.self_overlap_detected},
                {"out_of_bounds_uv_count", r.out_of_bounds_uv_count}};
}

json to_json(const omage::FidelityReport& r) {
    return json{{"chamfer", r.chamfer},
                {"occupancy_ratio", r.occupancy_ratio},
                {"open_boundary_length", r.open_boundary_length},
                {"patch_count", r.patch_count},
                {"cross_patch_triangles", r.cross_patch_triangles},
                {"byte_size", r.byte_size},
                {"sample_count", r.sample_count}};
}

json to_json(const omage::NormalizedFrame& f) {
    return json{{"center", {f.center.x, f.center.y, f.center.z}}, {"scale", f.scale}};
}

json to_json(const std::vector<omage::StageTiming>& ts) {
    json out = json::array();
    for (const auto& t : ts) out.push_back({{"name", t.name}, {"ms", t.ms}});
    return out;
}

json to_json(const omage::PipelineConfig& c) {
    return json{{"bake_resolution", c.bake_resolution},
                {"low_resolution", c.low_resolution},
                {"max_patches", c.max_patches},
                {"margin_px", c.margin_px},
                {"chamfer_samples", c.chamfer_samples},
                {"seed", c.seed}};
}

omage::NormalizedFrame frame_from_json(const json& j) {
    const json& f = j.contains("frame") ? j.at("frame") : j;
    omage::NormalizedFrame frame;
    frame.center = {f.at("center").at(0).get<double>(), f.at("center").at(1).get<double>(),
                    f.at("center").at(2).get<double>()};
    frame.scale = f.at("scale").get<double>();
    return frame;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// key=value config file; '#' starts a comment. Unknown keys are errors
// so that typos do not silently fall back to defaults.
void apply_config_file(const std::string& path, omage::PipelineConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw omage::Error(omage::ErrorCode::IoError, "cannot open config " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s(line);
        if (size_t hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw omage::Error(omage::ErrorCode::InvalidConfig,
                               "config line " + std::to_string(line_no) + ": expected key=value");
        std::string key(trim(s.substr(0, eq)));
        std::string value(trim(s.substr(eq + 1)));
        long long v = 0;
        try {
            size_t used = 0;
            v = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw omage::Error(omage::ErrorCode::InvalidConfig,
                               "config line " + std::to_string(line_no) + ": bad integer '" +
                                   value + "'");
        }
        if (key == "bake_resolution") cfg.bake_resolution = static_cast<int>(v);
        else if (key == "low_resolution") cfg.low_resolution = static_cast<int>(v);
        else if (key == "max_patches") cfg.max_patches = static_cast<int>(v);
        else if (key == "margin_px") cfg.margin_px = static_cast<int>(v);
        else if (key == "chamfer_samples") cfg.chamfer_samples = static_cast<int>(v);
        else if (key == "seed") cfg.seed = static_cast<uint64_t>(v);
        else
            throw omage::Error(omage::ErrorCode::InvalidConfig,
                               "config line " + std::to_string(line_no) + ": unknown key '" +
                                   key + "'");
    }
}

std::string stem_path(const std::string& path) {
    fs::path p(path);
    p.replace_extension();
    return p.string();
}

omage::WarnFn stderr_warn() {
    return [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
}

void emit(const json& doc, bool json_mode) {
    if (json_mode)
        std::cout << doc.dump() << "\n";
    else
        std::cout << doc.dump(2) << "\n";
}

// Analysis body shared by `analyze <x.omg>` and parts of roundtrip.
json analyze_omage_json(const omage::ObjectImage& img) {
    json out;
    out["resolution"] = img.resolution;
    out["byte_size"] = 16 + static_cast<int64_t>(img.resolution) * img.resolution *
                                omage::kChannels * 4;
    out["occupancy_ratio"] = omage::occupancy_ratio(img);
    std::vector<int32_t> labels = omage::label_patches(img);
    int max_label = -1;
    for (int32_t l : labels) max_label = std::max(max_label, l);
    out["patch_count"] = max_label + 1;
    if (max_label >= 0) {
        omage::DecodedMesh dec = omage::remesh(img);
        out["vertex_count"] = dec.positions.size();
        out["triangle_count"] = dec.triangles.size();
        out["open_boundary_length"] =
            omage::open_boundary_length(dec.positions, dec.triangles);
    } else {
        out["vertex_count"] = 0;
        out["triangle_count"] = 0;
        out["open_boundary_length"] = 0.0;
    }
    return out;
}

struct EncodeOutputs {
    std::string high, low, log, previews;
};

EncodeOutputs encode_to_files(const omage::IndexedMesh& mesh, const std::string& out_path,
                              const omage::PipelineConfig& cfg, json* log_doc) {
    omage::EncodeResult res = omage::encode(mesh, cfg);

    EncodeOutputs paths;
    std::string stem = stem_path(out_path);
    paths.high = out_path;
    paths.low = stem + "." + std::to_string(cfg.low_resolution) + ".omg";
    paths.log = stem + ".log.json";
    paths.previews = stem + "_previews";

    omage::write_omage(res.high, paths.high);
    omage::write_omage(res.low, paths.low);
    fs::create_directories(paths.previews);
    omage::write_previews(res.high, paths.previews);

    json log;
    log["atlas"] = to_json(res.report);
    log["kept_islands"] = res.kept_islands;
    log["frame"] = to_json(res.frame);
    log["timings"] = to_json(res.timings);
    log["config"] = to_json(cfg);
    log["outputs"] = {{"high", paths.high},
                      {"low", paths.low},
                      {"previews", paths.previews}};
    std::ofstream log_out(paths.log);
    if (!log_out) throw omage::Error(omage::ErrorCode::IoError, "cannot write " + paths.log);
    log_out << log.dump(2) << "\n";
    if (log_doc) *log_doc = std::move(log);
    return paths;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"omage: mesh <-> object-image codec"};
    app.require_subcommand(1);

    omage::PipelineConfig cfg;
    std::string config_file;
    bool json_mode = false;
    app.add_option("--config", config_file, "key=value config file");
    app.add_flag("--json", json_mode, "single-document JSON output on stdout");

    int opt_res = 0, opt_low = 0, opt_k = 0, opt_margin = -1, opt_samples = 0;
    uint64_t opt_seed = 0;
    auto add_pipeline_flags = [&](CLI::App* cmd) {
        cmd->add_option("--res", opt_res, "bake resolution (default 1024)");
        cmd->add_option("--low-res", opt_low, "downsample resolution (default 64)");
        cmd->add_option("--max-patches", opt_k, "largest patches kept (default 64)");
        cmd->add_option("--margin", opt_margin, "island margin in low-res pixels (default 2)");
        cmd->add_option("--seed", opt_seed, "sampling seed (default 0)");
        cmd->add_option("--samples", opt_samples, "chamfer sample count (default 100000)");
    };

    std::string in_path, out_path, frame_path, compare_mode;
    bool naive = false;

    CLI::App* c_encode = app.add_subcommand("encode", "OBJ -> OMG1 (+ low-res, previews, log)");
    c_encode->add_option("input", in_path, "input .obj")->required();
    c_encode->add_option("output", out_path, "output .omg")->required();
    add_pipeline_flags(c_encode);

    CLI::App* c_decode = app.add_subcommand("decode", "OMG1 -> OBJ (+ JSON sidecar)");
    c_decode->add_option("input", in_path, "input .omg")->required();
    c_decode->add_option("output", out_path, "output .obj")->required();
    c_decode->add_option("--frame", frame_path, "encode log or frame JSON for world units");

    CLI::App* c_down = app.add_subcommand("downsample", "OMG1 -> lower-resolution OMG1");
    c_down->add_option("input", in_path, "input .omg")->required();
    c_down->add_option("output", out_path, "output .omg")->required();
    c_down->add_option("--low-res", opt_low, "target resolution (default 64)");
    c_down->add_flag("--naive", naive, "plain block mean instead of boundary snapping");

    CLI::App* c_analyze = app.add_subcommand("analyze", "report on a mesh or omage");
    c_analyze->add_option("input", in_path, "input .obj or .omg")->required();
    c_analyze->add_option("--compare", compare_mode,
                          "'naive': encode with both pooling modes and report fidelity");
    add_pipeline_flags(c_analyze);

    CLI::App* c_round = app.add_subcommand("roundtrip", "encode in memory, report fidelity");
    c_round->add_option("input", in_path, "input .obj")->required();
    add_pipeline_flags(c_round);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_file.empty()) apply_config_file(config_file, cfg);
        // Flags override the config file.
        if (opt_res > 0) cfg.bake_resolution = opt_res;
        if (opt_low > 0) cfg.low_resolution = opt_low;
        if (opt_k > 0) cfg.max_patches = opt_k;
        if (opt_margin >= 0) cfg.margin_px = opt_margin;
        if (opt_samples > 0) cfg.chamfer_samples = opt_samples;
        if (c_encode->parsed() || c_analyze->parsed() || c_round->parsed())
            if (c_encode->count("--seed") || c_analyze->count("--seed") ||
                c_round->count("--seed"))
                cfg.seed = opt_seed;

        if (c_encode->parsed()) {
            omage::IndexedMesh mesh = omage::load_obj(in_path, stderr_warn());
            json log;
            encode_to_files(mesh, out_path, cfg, &log);
            emit(log, json_mode);
        } else if (c_decode->parsed()) {
            omage::ObjectImage img = omage::read_omage(in_path);
            omage::DecodedMesh dec = omage::remesh(img);
            if (!frame_path.empty()) {
                std::ifstream fin(frame_path);
                if (!fin)
                    throw omage::Error(omage::ErrorCode::IoError, "cannot open " + frame_path);
                json fdoc = json::parse(fin, nullptr, true, true);
                omage::restore_world(dec, frame_from_json(fdoc));
            }
            omage::save_obj(out_path, dec.positions, dec.uvs, dec.triangles,
                            dec.vertex_normals);

            json side;
            side["patch_label"] = dec.patch_label;
            side["metalness"] = dec.vertex_metalness;
            side["roughness"] = dec.vertex_roughness;
            json albedo = json::array();
            for (const omage::Vec3& a : dec.vertex_albedo)
                albedo.push_back({a.x, a.y, a.z});
            side["albedo"] = std::move(albedo);
            int patch_count = 0;
            for (int l : dec.patch_label) patch_count = std::max(patch_count, l + 1);
            side["patch_count"] = patch_count;
            std::string side_path = out_path + ".json";
            std::ofstream side_out(side_path);
            if (!side_out)
                throw omage::Error(omage::ErrorCode::IoError, "cannot write " + side_path);
            side_out << side.dump(2) << "\n";
            emit(json{{"output", out_path},
                      {"sidecar", side_path},
                      {"vertices", dec.positions.size()},
                      {"triangles", dec.triangles.size()}},
                 json_mode);
        } else if (c_down->parsed()) {
            omage::ObjectImage img = omage::read_omage(in_path);
            int low = opt_low > 0 ? opt_low : cfg.low_resolution;
            omage::ObjectImage pooled =
                naive ? omage::naive_pool(img, low) : omage::sparse_pool(img, low);
            omage::write_omage(pooled, out_path);
            emit(json{{"output", out_path}, {"resolution", low}}, json_mode);
        } else if (c_analyze->parsed()) {
            std::string ext = fs::path(in_path).extension().string();
            if (ext == ".omg") {
                omage::ObjectImage img = omage::read_omage(in_path);
                emit(analyze_omage_json(img), json_mode);
            } else {
                omage::IndexedMesh mesh = omage::load_obj(in_path, stderr_warn());
                if (compare_mode == "naive") {
                    omage::EncodeResult sparse = omage::encode(mesh, cfg, false);
                    omage::EncodeResult plain = omage::encode(mesh, cfg, true);
                    omage::FidelityReport fr_sparse =
                        omage::fidelity(mesh, sparse.low, sparse.frame,
                                        cfg.chamfer_samples, cfg.seed);
                    omage::FidelityReport fr_naive =
                        omage::fidelity(mesh, plain.low, plain.frame,
                                        cfg.chamfer_samples, cfg.seed);
                    emit(json{{"sparse", to_json(fr_sparse)}, {"naive", to_json(fr_naive)}},
                         json_mode);
                } else if (!compare_mode.empty()) {
                    throw omage::Error(omage::ErrorCode::InvalidConfig,
                                       "unknown --compare mode '" + compare_mode + "'");
                } else {
                    omage::IndexedMesh merged = omage::merge_coincident_vertices(mesh);
                    omage::AtlasReport report = omage::validate_atlas(merged);
                    emit(to_json(report), json_mode);
                }
            }
        } else if (c_round->parsed()) {
            omage::IndexedMesh mesh = omage::load_obj(in_path, stderr_warn());
            omage::EncodeResult res = omage::encode(mesh, cfg);
            omage::FidelityReport high =
                omage::fidelity(mesh, res.high, res.frame, cfg.chamfer_samples, cfg.seed);
            omage::FidelityReport low =
                omage::fidelity(mesh, res.low, res.frame, cfg.chamfer_samples, cfg.seed);
            emit(json{{"high", to_json(high)},
                      {"low", to_json(low)},
                      {"atlas", to_json(res.report)},
                      {"timings", to_json(res.timings)}},
                 json_mode);
        }
    } catch (const omage::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << json{{"error", omage::error_code_name(e.code)},
                          {"message", e.what()}}.dump()
                  << "\n";
        return exit_code_for(e.code);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
