#include "curvireg/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvireg/errors.hpp"

namespace curvireg {

PointSet extract_feature_points(const SaliencyMap& map, double percentile) {
    if (percentile < 0.0 || percentile > 100.0)
        throw ParameterError("extract_feature_points: percentile out of range");
    std::vector<double> positives;
    positives.reserve(map.mask.size());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            if (map.valid(x, y) && map.value.at(x, y) > 0.0)
                positives.push_back(map.value.at(x, y));
    if (positives.empty())
        return {};
    std::sort(positives.begin(), positives.end());
    const double thr =
        positives[static_cast<size_t>(percentile / 100.0 * (positives.size() - 1))];

    PointSet points;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const double v = map.value.at(x, y);
            if (!map.valid(x, y) || v < thr || v <= 0.0)
                continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1 && is_max; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= map.width() || ny < 0 || ny >= map.height())
                        continue;
                    const double nv = map.value.at(nx, ny);
                    // Strict test against earlier scan positions breaks
                    // plateau ties toward the first pixel.
                    if (dy < 0 || (dy == 0 && dx < 0)) {
                        if (nv >= v)
                            is_max = false;
                    } else if (nv > v) {
                        is_max = false;
                    }
                }
            if (is_max)
                points.push_back({static_cast<double>(x), static_cast<double>(y), v});
        }
    }
    return points;
}

PointGrid::PointGrid(const PointSet& points, double cell_size)
    : points_(points), cell_(std::max(cell_size, 1e-6)) {
    if (points_.empty())
        return;
    double max_x = points_[0].x, max_y = points_[0].y;
    min_x_ = points_[0].x;
    min_y_ = points_[0].y;
    for (const auto& p : points_) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    nx_ = static_cast<int>((max_x - min_x_) / cell_) + 1;
    ny_ = static_cast<int>((max_y - min_y_) / cell_) + 1;
    cells_.resize(static_cast<size_t>(nx_) * ny_);
    for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
        const int cx = static_cast<int>((points_[i].x - min_x_) / cell_);
        const int cy = static_cast<int>((points_[i].y - min_y_) / cell_);
        cells_[static_cast<size_t>(cy) * nx_ + cx].indices.push_back(i);
    }
}

double PointGrid::nearest_sq(double x, double y) const {
    if (points_.empty())
        return std::numeric_limits<double>::infinity();
    const int cx = std::clamp(static_cast<int>((x - min_x_) / cell_), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>((y - min_y_) / cell_), 0, ny_ - 1);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = nx_ + ny_ + 2;
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Every point in a ring-r cell lies at least (r-1)*cell away, so once
        // that bound passes the current best nothing further can win.
        if (std::isfinite(best)) {
            const double lower = (ring - 1) * cell_;
            if (lower > 0.0 && lower * lower > best)
                break;
        }
        for (int gy = cy - ring; gy <= cy + ring; ++gy) {
            for (int gx = cx - ring; gx <= cx + ring; ++gx) {
                if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring)
                    continue;  // ring boundary only
                if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_)
                    continue;
                for (int i : cells_[static_cast<size_t>(gy) * nx_ + gx].indices) {
                    const double dx = points_[i].x - x;
                    const double dy = points_[i].y - y;
                    best = std::min(best, dx * dx + dy * dy);
                }
            }
        }
    }
    return best;
}

}  // namespace curvireg
