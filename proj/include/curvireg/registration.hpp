#ifndef CURVIREG_REGISTRATION_HPP
#define CURVIREG_REGISTRATION_HPP

#include <vector>

#include "curvireg/features.hpp"
#include "curvireg/viewpoint.hpp"

namespace curvireg {

struct RepScore {
    double rep = 0.0;   // fraction of query points with a depth point within eps
    double eps_px = 3.0;
};

RepScore repeatability(const PointSet& query_pts, const PointSet& depth_pts, double eps_px);

/// Gaussian similarity of the dissimilarities R_i = 1 - rep_i around their
/// mean: exp(-(R_i - mean)^2 / (2 sigma_r^2)).
std::vector<double> s_rep(const std::vector<RepScore>& reps, double sigma_r = 0.1);

struct ViewScore {
    int view_id = 0;
    Viewpoint viewpoint;
    double s_hog = 0.0;
    double s_rep = 0.0;
    double s_combined = 0.0;
};

using SimilarityTable = std::vector<ViewScore>;

/// Min-max normalizes the raw descriptor scores across views, then takes the
/// elementwise product with the repeatability similarities.
SimilarityTable combine(const std::vector<double>& s_hog_raw,
                        const std::vector<double>& s_rep_scores);

/// Top-k by descending combined score, ties broken by lower view id.
SimilarityTable rank_views(const SimilarityTable& table, int k);

/// Frobenius norm of (Te^-1 Tg - I): zero iff the two poses agree.
double pose_error(const PoseTransform& tg, const PoseTransform& te);

}  // namespace curvireg

#endif
