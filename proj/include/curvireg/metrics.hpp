#ifndef CURVIREG_METRICS_HPP
#define CURVIREG_METRICS_HPP

#include "curvireg/features.hpp"

namespace curvireg {

/// Percentage of points in A with a point of B within eps pixels.
double intersection_percentage(const PointSet& a, const PointSet& b, double eps_px);

/// Exact symmetric Hausdorff distance, Euclidean metric.
double hausdorff(const PointSet& a, const PointSet& b);

}  // namespace curvireg

#endif
