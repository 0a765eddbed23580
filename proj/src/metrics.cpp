#include "curvireg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "curvireg/errors.hpp"

namespace curvireg {

double intersection_percentage(const PointSet& a, const PointSet& b, double eps_px) {
    if (a.empty())
        throw ParameterError("intersection_percentage: undefined for empty A");
    if (b.empty())
        return 0.0;
    const PointGrid grid(b, std::max(eps_px, 1.0));
    const double eps_sq = eps_px * eps_px;
    int hits = 0;
    for (const auto& p : a)
        if (grid.nearest_sq(p.x, p.y) <= eps_sq)
            ++hits;
    return 100.0 * hits / static_cast<double>(a.size());
}

namespace {
double directed_hausdorff_sq(const PointSet& from, const PointGrid& to) {
    double worst = 0.0;
    for (const auto& p : from)
        worst = std::max(worst, to.nearest_sq(p.x, p.y));
    return worst;
}
}  // namespace

double hausdorff(const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty())
        throw ParameterError("hausdorff: undefined for empty sets");
    const PointGrid ga(a);
    const PointGrid gb(b);
    return std::sqrt(std::max(directed_hausdorff_sq(a, gb), directed_hausdorff_sq(b, ga)));
}

}  // namespace curvireg
