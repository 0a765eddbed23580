#include "curvireg/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "curvireg/errors.hpp"
#include "curvireg/parallel.hpp"

namespace curvireg {

namespace {

double wrap_azimuth_diff(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d < -180.0)
        d += 360.0;
    if (d > 180.0)
        d -= 360.0;
    return d;
}

std::vector<double> grid_axis(double lo, double hi, double step) {
    std::vector<double> vals;
    if (hi < lo)
        std::swap(lo, hi);
    for (double v = lo; v <= hi + 1e-9; v += step)
        vals.push_back(v);
    if (vals.empty())
        vals.push_back(lo);
    return vals;
}

struct CandidateScore {
    double s_hog_raw = 0.0;
    RepScore rep;
};

CandidateScore score_one(const ViewRecord& view, const QueryFeatures& query,
                         const DescriptorStats& stats, const PipelineParams& params) {
    CandidateScore s;
    s.s_hog_raw = s_hog(query.descriptor, view.descriptor, stats);
    s.rep = repeatability(query.points, view.points, params.eps_px);
    return s;
}

SimilarityTable combine_candidates(const std::vector<CandidateScore>& scores,
                                   const PipelineParams& params) {
    std::vector<double> shog(scores.size());
    std::vector<RepScore> reps(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
        shog[i] = scores[i].s_hog_raw;
        reps[i] = scores[i].rep;
    }
    return combine(shog, s_rep(reps, params.sigma_r));
}

}  // namespace

QueryDetector query_detector_from_string(const std::string& name) {
    if (name == "CS" || name == "cs")
        return QueryDetector::kCs;
    if (name == "MCS" || name == "mcs")
        return QueryDetector::kMcs;
    if (name == "MFC" || name == "mfc")
        return QueryDetector::kMfc;
    throw ParameterError("unknown detector mode: " + name);
}

std::string to_string(QueryDetector d) {
    switch (d) {
        case QueryDetector::kCs: return "CS";
        case QueryDetector::kMcs: return "MCS";
        case QueryDetector::kMfc: return "MFC";
    }
    return "CS";
}

ViewRecord make_view_record(const Mesh& normalized_mesh, const Viewpoint& vp, int id,
                            const PipelineParams& params) {
    ViewRecord rec;
    rec.id = id;
    rec.viewpoint = vp;
    rec.pose = viewpoint_to_pose(vp);
    const DepthImage depth = render_depth(normalized_mesh, vp, params.image_size,
                                          params.pixel_scale, params.fill_fraction);
    const SaliencyMap cs = curvilinear_saliency_depth(depth, params.detect_sigma);
    rec.descriptor = oriented_hog(cs, params.hog, "CS");
    rec.points = extract_feature_points(cs, params.percentile);
    return rec;
}

ViewDatabase build_view_database(const Mesh& raw_mesh, const std::vector<Viewpoint>& viewpoints,
                                 const PipelineParams& params) {
    if (viewpoints.empty())
        throw ParameterError("build_view_database: no viewpoints");
    ViewDatabase db;
    auto [normalized, tf] = pca_normalize(raw_mesh);
    db.mesh = std::move(normalized);
    db.normalization = tf;
    db.image_size = params.image_size;
    db.pixel_scale = params.pixel_scale > 0.0
                         ? params.pixel_scale
                         : auto_pixel_scale(db.mesh, params.image_size, params.fill_fraction);
    PipelineParams fixed = params;
    fixed.pixel_scale = db.pixel_scale;

    db.views.resize(viewpoints.size());
    parallel_indexed(static_cast<int>(viewpoints.size()), [&](int i) {
        db.views[i] = make_view_record(db.mesh, viewpoints[i], i, fixed);
    });

    if (db.views.size() >= 2) {
        std::vector<HogDescriptor> descs;
        descs.reserve(db.views.size());
        for (const auto& v : db.views)
            descs.push_back(v.descriptor);
        db.stats = fit_stats(descs);
        db.has_stats = true;
    }
    return db;
}

QueryFeatures make_query_features(const IntensityImage& image, QueryDetector detector,
                                  int scales, const PipelineParams& params,
                                  const McsParams& mcs, const MfcParams& mfc) {
    QueryFeatures q;
    q.detector = detector;
    switch (detector) {
        case QueryDetector::kCs:
            q.map = image_curvilinear_saliency(image, params.detect_sigma);
            break;
        case QueryDetector::kMcs:
            q.map = multi_scale_cs(image, scales, mcs);
            break;
        case QueryDetector::kMfc:
            q.map = multi_focus_curves(image, scales, mfc);
            break;
    }
    q.descriptor = oriented_hog(q.map, params.hog, to_string(detector));
    q.points = extract_feature_points(q.map, params.percentile);
    return q;
}

SimilarityTable score_views(const ViewDatabase& db, const QueryFeatures& query,
                            const PipelineParams& params) {
    if (db.views.empty())
        throw ParameterError("score_views: empty database");
    if (!db.has_stats)
        throw ParameterError("score_views: database statistics not fitted");
    std::vector<CandidateScore> scores(db.views.size());
    parallel_indexed(static_cast<int>(db.views.size()), [&](int i) {
        scores[i] = score_one(db.views[i], query, db.stats, params);
    });
    SimilarityTable table = combine_candidates(scores, params);
    for (size_t i = 0; i < table.size(); ++i) {
        table[i].view_id = db.views[i].id;
        table[i].viewpoint = db.views[i].viewpoint;
    }
    return table;
}

RefineResult refine_pose(const ViewDatabase& db, const QueryFeatures& query,
                         const SimilarityTable& seeds, const PipelineParams& params) {
    if (seeds.empty())
        throw ParameterError("refine_pose: no seed views");
    if (!db.has_stats)
        throw ParameterError("refine_pose: database statistics not fitted");

    // Coherent seeds: within one coarse grid step of the best one. Azimuths
    // are unwrapped around the best seed so the box stays contiguous.
    const ViewScore& top = seeds.front();
    std::vector<Viewpoint> kept;
    for (const auto& s : seeds) {
        const double da = wrap_azimuth_diff(s.viewpoint.azimuth_deg, top.viewpoint.azimuth_deg);
        if (std::abs(s.viewpoint.elevation_deg - top.viewpoint.elevation_deg) <=
                params.coarse_h_deg + 1e-6 &&
            std::abs(da) <= params.coarse_a_deg + 1e-6 &&
            std::abs(s.viewpoint.distance_m - top.viewpoint.distance_m) <=
                params.coarse_v_m + 1e-6) {
            Viewpoint vp = s.viewpoint;
            vp.azimuth_deg = top.viewpoint.azimuth_deg + da;
            kept.push_back(vp);
        }
    }
    double h_lo, h_hi, a_lo, a_hi, v_lo, v_hi;
    if (kept.size() <= 1) {
        // Single coherent seed: search its local neighborhood.
        h_lo = top.viewpoint.elevation_deg - params.coarse_h_deg;
        h_hi = top.viewpoint.elevation_deg + params.coarse_h_deg;
        a_lo = top.viewpoint.azimuth_deg - params.coarse_a_deg;
        a_hi = top.viewpoint.azimuth_deg + params.coarse_a_deg;
        v_lo = top.viewpoint.distance_m - params.coarse_v_m;
        v_hi = top.viewpoint.distance_m + params.coarse_v_m;
    } else {
        h_lo = h_hi = kept[0].elevation_deg;
        a_lo = a_hi = kept[0].azimuth_deg;
        v_lo = v_hi = kept[0].distance_m;
        for (const auto& vp : kept) {
            h_lo = std::min(h_lo, vp.elevation_deg);
            h_hi = std::max(h_hi, vp.elevation_deg);
            a_lo = std::min(a_lo, vp.azimuth_deg);
            a_hi = std::max(a_hi, vp.azimuth_deg);
            v_lo = std::min(v_lo, vp.distance_m);
            v_hi = std::max(v_hi, vp.distance_m);
        }
    }
    h_lo = std::clamp(h_lo, 0.0, 179.0);
    h_hi = std::clamp(h_hi, 0.0, 179.0);
    v_lo = std::max(v_lo, 1e-3);
    v_hi = std::max(v_hi, v_lo);

    RefineResult result;
    result.viewpoint = top.viewpoint;
    result.pose = viewpoint_to_pose(top.viewpoint);

    PipelineParams fixed = params;
    fixed.pixel_scale = db.pixel_scale;  // candidates must match the database scale
    fixed.image_size = db.image_size;

    double sh = params.step_h_deg;
    double sa = params.step_a_deg;
    double sv = params.step_v_m;
    PoseTransform prev = result.pose;

    for (int round = 0; round < params.max_rounds; ++round) {
        const auto hs = grid_axis(h_lo, h_hi, sh);
        const auto as = grid_axis(a_lo, a_hi, sa);
        const auto vs = grid_axis(v_lo, v_hi, sv);
        std::vector<Viewpoint> cands;
        cands.reserve(hs.size() * as.size() * vs.size());
        for (double h : hs)
            for (double a : as)
                for (double v : vs) {
                    double az = std::fmod(a, 360.0);
                    if (az < 0.0)
                        az += 360.0;
                    cands.push_back(Viewpoint{h, az, v});
                }

        std::vector<CandidateScore> scores(cands.size());
        parallel_indexed(static_cast<int>(cands.size()), [&](int i) {
            const ViewRecord rec = make_view_record(db.mesh, cands[i], i, fixed);
            scores[i] = score_one(rec, query, db.stats, fixed);
        });
        const SimilarityTable table = combine_candidates(scores, params);
        size_t best = 0;
        for (size_t i = 1; i < table.size(); ++i)
            if (table[i].s_combined > table[best].s_combined)
                best = i;

        result.viewpoint = cands[best];
        result.pose = viewpoint_to_pose(cands[best]);
        result.rounds = round + 1;
        const double e = pose_error(prev, result.pose);
        result.e_trace.push_back(e);
        prev = result.pose;
        if (e <= params.epsilon) {
            result.converged = true;
            break;
        }

        h_lo = std::clamp(result.viewpoint.elevation_deg - sh, 0.0, 179.0);
        h_hi = std::clamp(result.viewpoint.elevation_deg + sh, 0.0, 179.0);
        a_lo = result.viewpoint.azimuth_deg - sa;
        a_hi = result.viewpoint.azimuth_deg + sa;
        v_lo = std::max(result.viewpoint.distance_m - sv, 1e-3);
        v_hi = result.viewpoint.distance_m + sv;
        sh = std::max(sh * 0.5, 1e-3);
        sa = std::max(sa * 0.5, 1e-3);
        sv = std::max(sv * 0.5, 1e-4);
    }
    return result;
}

RegistrationOutcome register_query(const ViewDatabase& db, const QueryFeatures& query,
                                   const PipelineParams& params) {
    RegistrationOutcome out;
    out.table = score_views(db, query, params);
    const int k = std::min<int>(params.top_k, static_cast<int>(out.table.size()));
    out.ranked = rank_views(out.table, k);
    out.refined = refine_pose(db, query, out.ranked, params);
    return out;
}

}  // namespace curvireg
