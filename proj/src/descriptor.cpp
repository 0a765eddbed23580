#include "curvireg/descriptor.hpp"

#include <cmath>

#include "curvireg/errors.hpp"

namespace curvireg {

namespace {

// Letterbox the saliency map into a square target: values bilinear, mask and
// orientation nearest. Outside pixels stay zero-weight.
SaliencyMap letterbox(const SaliencyMap& map, int target) {
    if (map.width() == target && map.height() == target)
        return map;
    SaliencyMap out(target, target);
    std::fill(out.mask.begin(), out.mask.end(), 0);
    const double scale =
        std::min(static_cast<double>(target) / map.width(), static_cast<double>(target) / map.height());
    const int new_w = std::max(1, static_cast<int>(std::lround(map.width() * scale)));
    const int new_h = std::max(1, static_cast<int>(std::lround(map.height() * scale)));
    const int off_x = (target - new_w) / 2;
    const int off_y = (target - new_h) / 2;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < new_h; ++y) {
        for (int x = 0; x < new_w; ++x) {
            const double sx = (x + 0.5) / scale - 0.5;
            const double sy = (y + 0.5) / scale - 0.5;
            const int nx = std::clamp(static_cast<int>(std::lround(sx)), 0, map.width() - 1);
            const int ny = std::clamp(static_cast<int>(std::lround(sy)), 0, map.height() - 1);
            out.value.at(off_x + x, off_y + y) = map.value.sample_bilinear(sx, sy);
            out.orient_x.at(off_x + x, off_y + y) = map.orient_x.at(nx, ny);
            out.orient_y.at(off_x + x, off_y + y) = map.orient_y.at(nx, ny);
            out.set_valid(off_x + x, off_y + y, map.valid(nx, ny));
        }
    }
    return out;
}

}  // namespace

HogDescriptor oriented_hog(const SaliencyMap& map, const HogParams& params,
                           const std::string& source) {
    if (map.width() == 0 || map.height() == 0)
        throw ParameterError("oriented_hog: empty map");

    const SaliencyMap boxed = letterbox(map, params.resize_to);
    const int cell_px = params.resize_to / HogDescriptor::kCells;

    HogDescriptor desc;
    desc.source = source;
    desc.data.assign(HogDescriptor::kSize, 0.0);

    constexpr double kBinWidth = 180.0 / HogDescriptor::kBins;
    for (int y = 0; y < boxed.height(); ++y) {
        for (int x = 0; x < boxed.width(); ++x) {
            const double wgt = boxed.value.at(x, y);
            if (wgt <= 0.0 || !boxed.valid(x, y))
                continue;
            double deg = std::atan2(boxed.orient_y.at(x, y), boxed.orient_x.at(x, y)) * 180.0 /
                         M_PI;
            deg = std::fmod(deg, 180.0);
            if (deg < 0.0)
                deg += 180.0;
            const double pos = deg / kBinWidth - 0.5;
            int b0 = static_cast<int>(std::floor(pos));
            const double frac = pos - b0;
            b0 = (b0 % HogDescriptor::kBins + HogDescriptor::kBins) % HogDescriptor::kBins;
            const int b1 = (b0 + 1) % HogDescriptor::kBins;
            const int cx = std::min(x / cell_px, HogDescriptor::kCells - 1);
            const int cy = std::min(y / cell_px, HogDescriptor::kCells - 1);
            const int cell = cy * HogDescriptor::kCells + cx;
            desc.data[cell * HogDescriptor::kBins + b0] += wgt * (1.0 - frac);
            desc.data[cell * HogDescriptor::kBins + b1] += wgt * frac;
        }
    }

    double total = 0.0;
    for (int cell = 0; cell < HogDescriptor::kCells * HogDescriptor::kCells; ++cell) {
        double norm = 0.0;
        for (int b = 0; b < HogDescriptor::kBins; ++b) {
            const double v = desc.data[cell * HogDescriptor::kBins + b];
            norm += v * v;
        }
        norm = std::sqrt(norm);
        const double div = std::max(norm, params.cell_epsilon);
        for (int b = 0; b < HogDescriptor::kBins; ++b)
            desc.data[cell * HogDescriptor::kBins + b] /= div;
        total += norm;
    }
    desc.all_zero = (total == 0.0);
    return desc;
}

void DescriptorStats::refactor() {
    Eigen::MatrixXd reg = sigma;
    reg.diagonal().array() += lambda_reg;
    chol.compute(reg);
    if (chol.info() != Eigen::Success)
        throw NumericError("DescriptorStats: regularized covariance is not positive definite");
}

DescriptorStats fit_stats(const std::vector<HogDescriptor>& descriptors) {
    const int n = static_cast<int>(descriptors.size());
    if (n < 2)
        throw ParameterError("fit_stats: need at least 2 descriptors");
    const int d = HogDescriptor::kSize;
    for (const auto& h : descriptors)
        if (static_cast<int>(h.data.size()) != d)
            throw ParameterError("fit_stats: descriptor dimension mismatch");

    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            x(i, j) = descriptors[i].data[j];

    DescriptorStats stats;
    stats.mu = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - stats.mu.transpose();
    stats.sigma = (centered.transpose() * centered) / static_cast<double>(n - 1);
    stats.lambda_reg = 0.01 * stats.sigma.trace() / d;
    if (stats.lambda_reg <= 0.0)
        stats.lambda_reg = 1e-10;  // identical descriptors still need an invertible factor
    stats.refactor();
    return stats;
}

double s_hog(const HogDescriptor& query, const HogDescriptor& db, const DescriptorStats& stats) {
    const int d = HogDescriptor::kSize;
    if (static_cast<int>(query.data.size()) != d || static_cast<int>(db.data.size()) != d ||
        stats.mu.size() != d)
        throw ParameterError("s_hog: dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> q(query.data.data(), d);
    Eigen::Map<const Eigen::VectorXd> v(db.data.data(), d);
    const Eigen::VectorXd solved = stats.chol.solve(q);
    return (v - stats.mu).dot(solved);
}

}  // namespace curvireg
