#include "curvireg/registration.hpp"

#include <algorithm>
#include <cmath>

#include "curvireg/errors.hpp"

namespace curvireg {

RepScore repeatability(const PointSet& query_pts, const PointSet& depth_pts, double eps_px) {
    if (query_pts.empty())
        throw ParameterError("repeatability: undefined for an empty query set");
    RepScore score;
    score.eps_px = eps_px;
    if (depth_pts.empty())
        return score;
    const PointGrid grid(depth_pts, std::max(eps_px, 1.0));
    const double eps_sq = eps_px * eps_px;
    int hits = 0;
    for (const auto& p : query_pts)
        if (grid.nearest_sq(p.x, p.y) <= eps_sq)
            ++hits;
    score.rep = hits / static_cast<double>(query_pts.size());
    return score;
}

std::vector<double> s_rep(const std::vector<RepScore>& reps, double sigma_r) {
    if (reps.empty())
        throw ParameterError("s_rep: need at least one view");
    if (sigma_r <= 0.0)
        throw ParameterError("s_rep: sigma_r must be positive");
    double mu = 0.0;
    for (const auto& r : reps)
        mu += 1.0 - r.rep;
    mu /= static_cast<double>(reps.size());
    std::vector<double> out(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        const double d = (1.0 - reps[i].rep) - mu;
        out[i] = std::exp(-d * d / (2.0 * sigma_r * sigma_r));
    }
    return out;
}

SimilarityTable combine(const std::vector<double>& s_hog_raw,
                        const std::vector<double>& s_rep_scores) {
    if (s_hog_raw.size() != s_rep_scores.size())
        throw ParameterError("combine: score vectors differ in length");
    if (s_hog_raw.empty())
        throw ParameterError("combine: no views");
    double lo = s_hog_raw[0];
    double hi = s_hog_raw[0];
    for (double v : s_hog_raw) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    SimilarityTable table(s_hog_raw.size());
    for (size_t i = 0; i < s_hog_raw.size(); ++i) {
        ViewScore& v = table[i];
        v.view_id = static_cast<int>(i);
        v.s_hog = s_hog_raw[i];
        v.s_rep = s_rep_scores[i];
        const double norm = (span > 0.0) ? (s_hog_raw[i] - lo) / span : 1.0;
        v.s_combined = norm * s_rep_scores[i];
    }
    return table;
}

SimilarityTable rank_views(const SimilarityTable& table, int k) {
    if (k < 1 || k > static_cast<int>(table.size()))
        throw ParameterError("rank_views: k out of range");
    SimilarityTable sorted = table;
    std::sort(sorted.begin(), sorted.end(), [](const ViewScore& a, const ViewScore& b) {
        if (a.s_combined != b.s_combined)
            return a.s_combined > b.s_combined;
        return a.view_id < b.view_id;
    });
    sorted.resize(k);
    return sorted;
}

double pose_error(const PoseTransform& tg, const PoseTransform& te) {
    const Eigen::Matrix4d m = te.inverse().matrix() * tg.matrix();
    return (m - Eigen::Matrix4d::Identity()).norm();
}

}  // namespace curvireg
