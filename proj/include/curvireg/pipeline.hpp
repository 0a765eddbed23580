#ifndef CURVIREG_PIPELINE_HPP
#define CURVIREG_PIPELINE_HPP

#include <string>
#include <vector>

#include "curvireg/depth_render.hpp"
#include "curvireg/descriptor.hpp"
#include "curvireg/mesh.hpp"
#include "curvireg/registration.hpp"
#include "curvireg/saliency_depth.hpp"
#include "curvireg/saliency_image.hpp"

namespace curvireg {

struct PipelineParams {
    int image_size = 256;
    double pixel_scale = 0.0;  // 0 = fit the bounding sphere
    double fill_fraction = 0.8;
    double detect_sigma = 1.0;
    double percentile = 90.0;
    double eps_px = 3.0;
    double sigma_r = 0.1;
    int top_k = 3;
    HogParams hog;

    // refinement
    double step_h_deg = 5.0;
    double step_a_deg = 5.0;
    double step_v_m = 0.05;
    double epsilon = 0.05;
    int max_rounds = 6;

    // coarse grid steps, used by the seed coherence test
    double coarse_h_deg = 50.0;
    double coarse_a_deg = 20.0;
    double coarse_v_m = 0.3;
};

struct ViewRecord {
    int id = 0;
    Viewpoint viewpoint;
    PoseTransform pose;
    HogDescriptor descriptor;
    PointSet points;  // depth CS feature points
};

/// Rendered views of one model: poses, depth-CS descriptors, feature points
/// and the descriptor statistics used for whitening.
struct ViewDatabase {
    Mesh mesh;  // PCA-normalized
    PoseTransform normalization;
    int image_size = 256;
    double pixel_scale = 0.0;
    std::vector<ViewRecord> views;
    DescriptorStats stats;
    bool has_stats = false;
};

/// Renders every viewpoint, detects depth CS, extracts descriptors and points,
/// and fits the statistics. Views are processed in parallel.
ViewDatabase build_view_database(const Mesh& raw_mesh, const std::vector<Viewpoint>& viewpoints,
                                 const PipelineParams& params);

/// Per-view record for a single viewpoint (used by the database build and by
/// each refinement round).
ViewRecord make_view_record(const Mesh& normalized_mesh, const Viewpoint& vp, int id,
                            const PipelineParams& params);

enum class QueryDetector { kCs, kMcs, kMfc };

QueryDetector query_detector_from_string(const std::string& name);
std::string to_string(QueryDetector d);

struct QueryFeatures {
    SaliencyMap map;
    HogDescriptor descriptor;
    PointSet points;
    QueryDetector detector = QueryDetector::kMfc;
};

QueryFeatures make_query_features(const IntensityImage& image, QueryDetector detector,
                                  int scales, const PipelineParams& params,
                                  const McsParams& mcs = {}, const MfcParams& mfc = {});

/// Scores the query against every database view: whitened descriptor score,
/// repeatability similarity, and their combination.
SimilarityTable score_views(const ViewDatabase& db, const QueryFeatures& query,
                            const PipelineParams& params);

struct RefineResult {
    Viewpoint viewpoint;
    PoseTransform pose;
    std::vector<double> e_trace;  // pose change per round
    bool converged = false;
    int rounds = 0;
};

/// Local grid search around the coherent seeds: render, rescore, halve the
/// steps, and stop once the estimate moves less than epsilon.
RefineResult refine_pose(const ViewDatabase& db, const QueryFeatures& query,
                         const SimilarityTable& seeds, const PipelineParams& params);

struct RegistrationOutcome {
    SimilarityTable table;   // all views, combined scores
    SimilarityTable ranked;  // top-k
    RefineResult refined;
};

RegistrationOutcome register_query(const ViewDatabase& db, const QueryFeatures& query,
                                   const PipelineParams& params);

}  // namespace curvireg

#endif
