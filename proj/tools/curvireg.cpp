#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "curvireg/config.hpp"
#include "curvireg/db_io.hpp"
#include "curvireg/errors.hpp"
#include "curvireg/io.hpp"
#include "curvireg/metrics.hpp"
#include "curvireg/saliency_depth.hpp"

namespace fs = std::filesystem;
using namespace curvireg;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitWarning = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
    std::string config_file;
    int threads = 0;
    std::vector<std::string> overrides;
};

Config make_config(const CommonOpts& opts) {
    Config cfg;
    if (!opts.config_file.empty())
        cfg.load_file(opts.config_file);
    for (const auto& kv : opts.overrides) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParameterError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
#ifdef _OPENMP
    if (opts.threads > 0)
        omp_set_num_threads(opts.threads);
#endif
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_file, "flat key=value configuration file");
    cmd->add_option("--threads", opts.threads, "cap worker threads (0 = default)");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set grid.h_step=45")
        ->take_all();
}

int cmd_render(const std::string& mesh_path, const std::string& out_dir, const Config& cfg) {
    const auto grid = sample_viewpoints(cfg.h_step_deg, cfg.a_step_deg, cfg.v_min_m, cfg.v_max_m,
                                        cfg.v_step_m);
    const int n = write_rendered_database(out_dir, mesh_path, grid, cfg.pipeline());
    std::cout << "rendered " << n << " views into " << out_dir << "\n";
    return kExitOk;
}

int cmd_detect(const std::string& input, const std::string& mode, const std::string& out_base,
               const Config& cfg) {
    const bool is_depth = input.size() > 4 && input.substr(input.size() - 4) == ".pfm";
    SaliencyMap map;
    if (is_depth) {
        if (mode != "cs")
            throw ParameterError("depth input supports only --mode cs");
        const std::string mask = input.substr(0, input.size() - 4) + "_mask.pgm";
        DepthImage depth;
        if (fs::exists(mask)) {
            depth = read_depth_image(input, mask);
        } else {
            depth.depth = read_pfm(input);
            // No sidecar: treat the stored max-finite sentinel as background.
            const double cap = 0.99 * std::numeric_limits<float>::max();
            for (double& v : depth.depth.values())
                if (v >= cap)
                    v = DepthImage::kBackground;
        }
        map = curvilinear_saliency_depth(depth, cfg.detect_sigma);
    } else {
        const IntensityImage img = read_intensity_image(input);
        const QueryDetector det = query_detector_from_string(mode);
        map = make_query_features(img, det, cfg.scales, cfg.pipeline(), cfg.mcs(), cfg.mfc()).map;
    }
    write_saliency(out_base, map);
    std::cout << "wrote " << out_base << "_{value,orient}.pfm\n";
    return kExitOk;
}

int cmd_describe(const std::string& db_dir, const Config& cfg) {
    const int n = describe_database(db_dir, cfg.pipeline());
    std::cout << "described " << n << " views in " << db_dir << "\n";
    return kExitOk;
}

json table_to_json(const SimilarityTable& table) {
    json rows = json::array();
    for (const auto& v : table) {
        rows.push_back(json{{"view_id", v.view_id},
                            {"h_deg", v.viewpoint.elevation_deg},
                            {"a_deg", v.viewpoint.azimuth_deg},
                            {"v_m", v.viewpoint.distance_m},
                            {"s_hog", v.s_hog},
                            {"s_rep", v.s_rep},
                            {"s_combined", v.s_combined}});
    }
    return rows;
}

void write_overlay(const std::string& path, const ViewDatabase& db, const QueryFeatures& query,
                   int best_view_id, const Config& cfg) {
    RgbImage img;
    img.width = db.image_size;
    img.height = db.image_size;
    img.pixels.assign(static_cast<size_t>(img.width) * img.height * 3, 0);
    auto put = [&](int x, int y, int c, uint8_t v) {
        if (x >= 0 && x < img.width && y >= 0 && y < img.height)
            img.pixels[(static_cast<size_t>(y) * img.width + x) * 3 + c] = v;
    };
    for (const auto& rec : db.views) {
        if (rec.id != best_view_id)
            continue;
        for (const auto& p : rec.points)
            put(static_cast<int>(p.x), static_cast<int>(p.y), 1, 255);  // depth: green
    }
    // Map query points through the same letterbox the descriptor used.
    const double scale = std::min(static_cast<double>(cfg.hog_resize) / query.map.width(),
                                  static_cast<double>(cfg.hog_resize) / query.map.height());
    const int off_x = (cfg.hog_resize - static_cast<int>(std::lround(query.map.width() * scale))) / 2;
    const int off_y =
        (cfg.hog_resize - static_cast<int>(std::lround(query.map.height() * scale))) / 2;
    for (const auto& p : query.points)
        put(off_x + static_cast<int>(p.x * scale), off_y + static_cast<int>(p.y * scale), 0,
            255);  // query: red
    write_png_rgb(path, img);
}

int cmd_register(const std::string& query_path, const std::string& db_dir,
                 const std::string& out_dir, const std::string& overlay, const Config& cfg) {
    fs::create_directories(out_dir);
    const PipelineParams params = cfg.pipeline();
    const ViewDatabase db = load_database(db_dir, params);
    if (db.views.empty())
        throw ParameterError("register: empty database");

    const IntensityImage img = read_intensity_image(query_path);
    const QueryFeatures query = make_query_features(
        img, query_detector_from_string(cfg.detector), cfg.scales, params, cfg.mcs(), cfg.mfc());

    const RegistrationOutcome outcome = register_query(db, query, params);

    json ranked;
    ranked["query"] = query_path;
    ranked["detector"] = cfg.detector;
    ranked["views"] = table_to_json(rank_views(outcome.table, static_cast<int>(outcome.table.size())));
    write_text_file((fs::path(out_dir) / "ranked_views.json").string(), ranked.dump(2) + "\n");

    const RefineResult& r = outcome.refined;
    json refined;
    refined["h_deg"] = r.viewpoint.elevation_deg;
    refined["a_deg"] = r.viewpoint.azimuth_deg;
    refined["v_m"] = r.viewpoint.distance_m;
    std::vector<double> rot(9);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            rot[i * 3 + k] = r.pose.rotation(i, k);
    refined["R"] = rot;
    refined["t"] = std::vector<double>{r.pose.translation.x(), r.pose.translation.y(),
                                       r.pose.translation.z()};
    refined["converged"] = r.converged;
    refined["rounds"] = r.rounds;
    refined["e_trace"] = r.e_trace;
    write_text_file((fs::path(out_dir) / "refined_pose.json").string(), refined.dump(2) + "\n");

    if (!overlay.empty())
        write_overlay(overlay, db, query, outcome.ranked.front().view_id, cfg);

    std::cout << "top view " << outcome.ranked.front().view_id << ", refined (h,a,v) = ("
              << r.viewpoint.elevation_deg << ", " << r.viewpoint.azimuth_deg << ", "
              << r.viewpoint.distance_m << ")" << (r.converged ? "" : " [not converged]")
              << "\n";
    return r.converged ? kExitOk : kExitWarning;
}

int cmd_evaluate(const std::string& pairs_path, const std::string& out_csv,
                 const std::string& mode, const Config& cfg) {
    const json pairs = json::parse(read_text_file(pairs_path));
    if (!pairs.is_array())
        throw ParseError(pairs_path + ": expected a JSON array of {image, depth} pairs");

    std::string csv;
    csv += "# points: percentile=" + std::to_string(cfg.percentile) +
           " nms=3x3 detector=" + mode + " eps_px=" + std::to_string(cfg.eps_px) + "\n";
    csv += "query,view,ip,hd,status\n";
    for (const auto& pair : pairs) {
        const std::string image = pair.value("image", "");
        const std::string depth_file = pair.value("depth", "");
        std::string row = image + "," + depth_file + ",";
        try {
            const IntensityImage img = read_intensity_image(image);
            const QueryFeatures q = make_query_features(img, query_detector_from_string(mode),
                                                        cfg.scales, cfg.pipeline(), cfg.mcs(),
                                                        cfg.mfc());
            DepthImage depth;
            const std::string mask = pair.value("mask", "");
            if (!mask.empty()) {
                depth = read_depth_image(depth_file, mask);
            } else {
                const std::string guess =
                    depth_file.substr(0, depth_file.size() - 4) + "_mask.pgm";
                depth = read_depth_image(depth_file, guess);
            }
            const SaliencyMap cs = curvilinear_saliency_depth(depth, cfg.detect_sigma);
            const PointSet dpts = extract_feature_points(cs, cfg.percentile);
            const double ip = intersection_percentage(q.points, dpts, cfg.eps_px);
            const double hd = hausdorff(q.points, dpts);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,ok", ip, hd);
            row += buf;
        } catch (const std::exception& e) {
            row += std::string(",,error: ") + e.what();
        }
        csv += row + "\n";
    }
    write_text_file(out_csv, csv);
    std::cout << "wrote " << out_csv << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvilinear-saliency 2D/3D registration"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string mesh_path, out_path, input, mode = "mfc", db_dir, query, pairs, overlay;

    auto* render = app.add_subcommand("render", "render a depth-view database from an OBJ mesh");
    render->add_option("mesh", mesh_path, "OBJ model")->required();
    render->add_option("--out", out_path, "database directory")->required();
    add_common(render, opts);

    auto* detect = app.add_subcommand("detect", "detect curvilinear features");
    detect->add_option("input", input, "depth PFM or intensity PNG/PGM/PPM")->required();
    detect->add_option("--mode", mode, "cs | mcs | mfc (depth input: cs only)");
    detect->add_option("--out", out_path, "output base path")->required();
    detect->add_option("--scales", [&](const std::vector<std::string>& v) {
        opts.overrides.push_back("detect.scales=" + v.front());
        return true;
    }, "MCS/MFC level count");
    add_common(detect, opts);

    auto* describe = app.add_subcommand("describe", "compute descriptors for a database");
    describe->add_option("db", db_dir, "database directory")->required();
    add_common(describe, opts);

    auto* reg = app.add_subcommand("register", "register a photograph against a database");
    reg->add_option("query", query, "query image (PNG/PGM/PPM)")->required();
    reg->add_option("db", db_dir, "database directory")->required();
    reg->add_option("--out", out_path, "output directory")->required();
    reg->add_option("--mode", mode, "query detector: cs | mcs | mfc");
    reg->add_option("--eps-px", [&](const std::vector<std::string>& v) {
        opts.overrides.push_back("register.eps_px=" + v.front());
        return true;
    }, "repeatability radius in pixels");
    reg->add_option("--scales", [&](const std::vector<std::string>& v) {
        opts.overrides.push_back("detect.scales=" + v.front());
        return true;
    }, "detector level count");
    reg->add_option("--overlay", overlay, "write a query-vs-view overlay PNG");
    add_common(reg, opts);

    auto* evaluate = app.add_subcommand("evaluate", "IP/HD report for image-depth pairs");
    evaluate->add_option("pairs", pairs, "JSON array of {image, depth[, mask]}")->required();
    evaluate->add_option("--out", out_path, "output CSV path")->required();
    evaluate->add_option("--mode", mode, "image detector: cs | mcs | mfc");
    evaluate->add_option("--eps-px", [&](const std::vector<std::string>& v) {
        opts.overrides.push_back("register.eps_px=" + v.front());
        return true;
    }, "IP radius in pixels");
    add_common(evaluate, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Config cfg = make_config(opts);
        if (render->parsed())
            return cmd_render(mesh_path, out_path, cfg);
        if (detect->parsed()) {
            const bool is_depth =
                input.size() > 4 && input.substr(input.size() - 4) == ".pfm";
            if (is_depth && detect->count("--mode") == 0)
                mode = "cs";  // depth input has a single detector
            return cmd_detect(input, mode, out_path, cfg);
        }
        if (describe->parsed())
            return cmd_describe(db_dir, cfg);
        if (reg->parsed()) {
            if (reg->count("--mode") > 0)
                cfg.detector = mode;
            cfg.validate();
            return cmd_register(query, db_dir, out_path, overlay, cfg);
        }
        if (evaluate->parsed())
            return cmd_evaluate(pairs, out_path, mode, cfg);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
