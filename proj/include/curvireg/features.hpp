#ifndef CURVIREG_FEATURES_HPP
#define CURVIREG_FEATURES_HPP

#include <vector>

#include "curvireg/saliency.hpp"

namespace curvireg {

struct FeaturePoint {
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
};

using PointSet = std::vector<FeaturePoint>;

/// Thresholds a saliency map at the given percentile of its positive values
/// and keeps 3x3 local maxima, scanned row-major.
PointSet extract_feature_points(const SaliencyMap& map, double percentile = 90.0);

/// Uniform-grid nearest-neighbor index; a pruning structure only, distances
/// stay exact.
class PointGrid {
public:
    explicit PointGrid(const PointSet& points, double cell_size = 8.0);

    /// Exact squared distance from (x, y) to the closest indexed point.
    double nearest_sq(double x, double y) const;
    bool empty() const { return points_.empty(); }

private:
    struct Cell {
        std::vector<int> indices;
    };
    const PointSet points_;
    double cell_ = 8.0;
    double min_x_ = 0.0, min_y_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<Cell> cells_;
};

}  // namespace curvireg

#endif
