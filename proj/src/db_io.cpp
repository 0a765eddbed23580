#include "curvireg/db_io.hpp"

#include <cstdio>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "curvireg/errors.hpp"
#include "curvireg/io.hpp"
#include "curvireg/parallel.hpp"
#include "curvireg/saliency_depth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace curvireg {

namespace {

std::string view_stem(int id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "view_%03d", id);
    return buf;
}

json transform_to_json(const PoseTransform& t) {
    std::vector<double> r(9);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            r[i * 3 + k] = t.rotation(i, k);
    return json{{"R", r},
                {"t", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

PoseTransform transform_from_json(const json& j) {
    PoseTransform t;
    const auto r = j.at("R").get<std::vector<double>>();
    const auto tr = j.at("t").get<std::vector<double>>();
    if (r.size() != 9 || tr.size() != 3)
        throw ParseError("pose record: R must have 9 entries and t 3");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            t.rotation(i, k) = r[i * 3 + k];
    t.translation = Eigen::Vector3d(tr[0], tr[1], tr[2]);
    return t;
}

}  // namespace

int write_rendered_database(const std::string& db_dir, const std::string& model_path,
                            const std::vector<Viewpoint>& viewpoints,
                            const PipelineParams& params) {
    fs::create_directories(db_dir);
    const Mesh raw = load_mesh(model_path);
    auto [mesh, tf] = pca_normalize(raw);
    const double scale = params.pixel_scale > 0.0
                             ? params.pixel_scale
                             : auto_pixel_scale(mesh, params.image_size, params.fill_fraction);

    save_obj(mesh, (fs::path(db_dir) / "model_normalized.obj").string());

    std::vector<DepthImage> depths(viewpoints.size());
    parallel_indexed(static_cast<int>(viewpoints.size()), [&](int i) {
        depths[i] = render_depth(mesh, viewpoints[i], params.image_size, scale,
                                 params.fill_fraction);
    });

    json views = json::array();
    for (int i = 0; i < static_cast<int>(viewpoints.size()); ++i) {
        const std::string stem = view_stem(i);
        const fs::path base = fs::path(db_dir) / stem;
        write_depth_image(base.string() + ".pfm", base.string() + "_mask.pgm", depths[i]);
        write_text_file(base.string() + "_pose.json",
                        pose_record_json(model_path, viewpoints[i],
                                         viewpoint_to_pose(viewpoints[i])));
        views.push_back(json{{"id", i},
                             {"h_deg", viewpoints[i].elevation_deg},
                             {"a_deg", viewpoints[i].azimuth_deg},
                             {"v_m", viewpoints[i].distance_m},
                             {"depth", stem + ".pfm"},
                             {"mask", stem + "_mask.pgm"},
                             {"pose", stem + "_pose.json"}});
    }

    json manifest;
    manifest["model"] = model_path;
    manifest["normalized_model"] = "model_normalized.obj";
    manifest["image_size"] = params.image_size;
    manifest["pixel_scale"] = scale;
    manifest["normalization"] = transform_to_json(tf);
    manifest["views"] = views;
    write_text_file((fs::path(db_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    return static_cast<int>(viewpoints.size());
}

int describe_database(const std::string& db_dir, const PipelineParams& params) {
    const fs::path dir(db_dir);
    json manifest = json::parse(read_text_file((dir / "manifest.json").string()));
    auto& views = manifest.at("views");
    if (views.empty())
        throw ParameterError("describe_database: empty database");

    std::vector<HogDescriptor> descs(views.size());
    std::vector<PointSet> points(views.size());
    parallel_indexed(static_cast<int>(views.size()), [&](int i) {
        const auto& v = views[i];
        const DepthImage depth =
            read_depth_image((dir / v.at("depth").get<std::string>()).string(),
                             (dir / v.at("mask").get<std::string>()).string());
        const SaliencyMap cs = curvilinear_saliency_depth(depth, params.detect_sigma);
        descs[i] = oriented_hog(cs, params.hog, "CS");
        points[i] = extract_feature_points(cs, params.percentile);
    });
    for (int i = 0; i < static_cast<int>(views.size()); ++i) {
        const std::string name = view_stem(views[i].at("id").get<int>()) + "_desc.json";
        write_descriptor_json((dir / name).string(), descs[i], points[i]);
        views[i]["descriptor"] = name;
    }
    if (descs.size() >= 2) {
        write_stats_json((dir / "stats.json").string(), fit_stats(descs));
        manifest["stats"] = "stats.json";
    }
    write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    return static_cast<int>(views.size());
}

ViewDatabase load_database(const std::string& db_dir, const PipelineParams& params) {
    const fs::path dir(db_dir);
    const json manifest = json::parse(read_text_file((dir / "manifest.json").string()));
    const auto& views = manifest.at("views");
    if (views.empty())
        throw ParameterError("load_database: empty database");

    ViewDatabase db;
    db.mesh = load_mesh((dir / manifest.at("normalized_model").get<std::string>()).string());
    db.normalization = transform_from_json(manifest.at("normalization"));
    db.image_size = manifest.at("image_size").get<int>();
    db.pixel_scale = manifest.at("pixel_scale").get<double>();
    db.views.resize(views.size());

    parallel_indexed(static_cast<int>(views.size()), [&](int i) {
        const auto& v = views[i];
        ViewRecord& rec = db.views[i];
        rec.id = v.at("id").get<int>();
        rec.viewpoint = Viewpoint{v.at("h_deg").get<double>(), v.at("a_deg").get<double>(),
                                  v.at("v_m").get<double>()};
        rec.pose = viewpoint_to_pose(rec.viewpoint);
        if (v.contains("descriptor")) {
            read_descriptor_json((dir / v.at("descriptor").get<std::string>()).string(),
                                 rec.descriptor, rec.points);
        } else {
            const DepthImage depth =
                read_depth_image((dir / v.at("depth").get<std::string>()).string(),
                                 (dir / v.at("mask").get<std::string>()).string());
            const SaliencyMap cs = curvilinear_saliency_depth(depth, params.detect_sigma);
            rec.descriptor = oriented_hog(cs, params.hog, "CS");
            rec.points = extract_feature_points(cs, params.percentile);
        }
    });

    if (manifest.contains("stats")) {
        db.stats = read_stats_json((dir / manifest.at("stats").get<std::string>()).string());
        db.has_stats = true;
    } else if (db.views.size() >= 2) {
        std::vector<HogDescriptor> descs;
        descs.reserve(db.views.size());
        for (const auto& v : db.views)
            descs.push_back(v.descriptor);
        db.stats = fit_stats(descs);
        db.has_stats = true;
    }
    return db;
}

}  // namespace curvireg
