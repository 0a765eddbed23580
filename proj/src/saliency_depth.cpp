#include "curvireg/saliency_depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvireg/errors.hpp"
#include "curvireg/image_math.hpp"

namespace curvireg {

namespace {

// Fills background pixels with the value of the (approximately) nearest
// foreground pixel so derivative stencils never see the sentinel. Two chamfer
// sweeps, deterministic.
ScalarField fill_background(const DepthImage& z, std::vector<uint8_t>& foreground) {
    const int w = z.depth.width();
    const int h = z.depth.height();
    ScalarField filled(w, h);
    std::vector<int> dist(static_cast<size_t>(w) * h);
    foreground.assign(static_cast<size_t>(w) * h, 0);

    const int kFar = std::numeric_limits<int>::max() / 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (z.is_background(x, y)) {
                dist[i] = kFar;
                filled.at(x, y) = 0.0;
            } else {
                dist[i] = 0;
                filled.at(x, y) = z.depth.at(x, y);
                foreground[i] = 1;
            }
        }
    }

    auto relax = [&](int x, int y, int nx, int ny) {
        if (nx < 0 || nx >= w || ny < 0 || ny >= h)
            return;
        const size_t i = static_cast<size_t>(y) * w + x;
        const size_t j = static_cast<size_t>(ny) * w + nx;
        if (dist[j] + 1 < dist[i]) {
            dist[i] = dist[j] + 1;
            filled.at(x, y) = filled.at(nx, ny);
        }
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            relax(x, y, x - 1, y);
            relax(x, y, x, y - 1);
            relax(x, y, x - 1, y - 1);
            relax(x, y, x + 1, y - 1);
        }
    for (int y = h - 1; y >= 0; --y)
        for (int x = w - 1; x >= 0; --x) {
            relax(x, y, x + 1, y);
            relax(x, y, x, y + 1);
            relax(x, y, x + 1, y + 1);
            relax(x, y, x - 1, y + 1);
        }
    return filled;
}

bool touches_background(const std::vector<uint8_t>& fg, int w, int h, int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h)
                return true;  // image border counts as silhouette
            if (!fg[static_cast<size_t>(ny) * w + nx])
                return true;
        }
    return false;
}

}  // namespace

DepthShapeField depth_shape_operator(const DepthImage& z, double sigma) {
    const int w = z.depth.width();
    const int h = z.depth.height();
    std::vector<uint8_t> fg;
    const ScalarField filled = fill_background(z, fg);
    if (std::find(fg.begin(), fg.end(), 1) == fg.end())
        throw GeometryError("depth_shape_operator: all-background depth image");

    auto [zx, zy] = derivatives1(filled, sigma);
    auto [zxx, zxy, zyy] = derivatives2(filled, sigma);

    DepthShapeField out;
    out.m11 = ScalarField(w, h);
    out.m12 = ScalarField(w, h);
    out.m21 = ScalarField(w, h);
    out.m22 = ScalarField(w, h);
    out.grad_mag = ScalarField(w, h);
    out.k1 = ScalarField(w, h);
    out.k2 = ScalarField(w, h);
    out.valid.assign(static_cast<size_t>(w) * h, 0);
    out.rim.assign(static_cast<size_t>(w) * h, 0);

    long complex_count = 0;
#pragma omp parallel for schedule(static) reduction(+ : complex_count)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!fg[i])
                continue;
            if (touches_background(fg, w, h, x, y)) {
                out.rim[i] = 1;
                continue;
            }
            out.valid[i] = 1;
            const double gx = zx.at(x, y);
            const double gy = zy.at(x, y);
            const double hxx = zxx.at(x, y);
            const double hxy = zxy.at(x, y);
            const double hyy = zyy.at(x, y);
            const double m11 = (gy * gy + 1.0) * hxx - gx * gy * hxy;
            const double m12 = (gy * gy + 1.0) * hxy - gx * gy * hyy;
            const double m21 = (gx * gx + 1.0) * hxy - gx * gy * hxx;
            const double m22 = (gx * gx + 1.0) * hyy - gx * gy * hxy;
            out.m11.at(x, y) = m11;
            out.m12.at(x, y) = m12;
            out.m21.at(x, y) = m21;
            out.m22.at(x, y) = m22;
            const double grad = std::sqrt(gx * gx + gy * gy);
            out.grad_mag.at(x, y) = grad;

            const double tr = m11 + m22;
            const double det = m11 * m22 - m12 * m21;
            double disc = tr * tr - 4.0 * det;
            if (disc < 0.0) {
                ++complex_count;  // non-symmetric M can stray complex; clamp
                disc = 0.0;
            }
            const double s = std::sqrt(disc);
            // Eigenvalues of -M, descending.
            out.k1.at(x, y) = grad * 0.5 * (-tr + s);
            out.k2.at(x, y) = grad * 0.5 * (-tr - s);
        }
    }
    out.complex_pixels = complex_count;
    return out;
}

SaliencyMap curvilinear_saliency_depth(const DepthImage& z, double sigma) {
    const DepthShapeField shape = depth_shape_operator(z, sigma);
    const int w = shape.width();
    const int h = shape.height();

    SaliencyMap map(w, h);
    std::fill(map.mask.begin(), map.mask.end(), 0);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!shape.valid[i])
                continue;
            map.mask[i] = 1;
            map.value.at(x, y) = shape.k1.at(x, y) - shape.k2.at(x, y);
            const double tr = shape.m11.at(x, y) + shape.m22.at(x, y);
            const double det = shape.m11.at(x, y) * shape.m22.at(x, y) -
                               shape.m12.at(x, y) * shape.m21.at(x, y);
            if (tr * tr - 4.0 * det < 0.0)
                continue;  // clamped pixel, value is 0 and orientation moot
            const Eig2 e = eig2(-shape.m11.at(x, y), -shape.m12.at(x, y), -shape.m21.at(x, y),
                                -shape.m22.at(x, y));
            // e_H1: eigenvector paired with the largest eigenvalue of M, the
            // across-ridge direction (shared eigenvector of -M's lambda2).
            map.orient_x.at(x, y) = e.e2[0];
            map.orient_y.at(x, y) = e.e2[1];
        }
    }

    // Occluding contour: rim pixels take a capped high value so the silhouette
    // ranks with the strongest interior ridges instead of blowing up.
    std::vector<double> interior;
    interior.reserve(map.mask.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (shape.valid[static_cast<size_t>(y) * w + x])
                interior.push_back(map.value.at(x, y));
    if (interior.empty())
        throw GeometryError("curvilinear_saliency_depth: no interior pixels");
    std::sort(interior.begin(), interior.end());
    const double cap = interior[static_cast<size_t>(0.99 * (interior.size() - 1))];

    // Silhouette normals from the smoothed foreground indicator.
    ScalarField indicator(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            indicator.at(x, y) =
                (shape.valid[static_cast<size_t>(y) * w + x] ||
                 shape.rim[static_cast<size_t>(y) * w + x])
                    ? 1.0
                    : 0.0;
    const ScalarField blurred = gaussian_smooth(indicator, 1.0);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            if (!shape.rim[i])
                continue;
            map.mask[i] = 1;
            map.value.at(x, y) = cap;
            const double nx = 0.5 * (blurred.at_clamped(x + 1, y) - blurred.at_clamped(x - 1, y));
            const double ny = 0.5 * (blurred.at_clamped(x, y + 1) - blurred.at_clamped(x, y - 1));
            const double n = std::hypot(nx, ny);
            if (n > 1e-12) {
                map.orient_x.at(x, y) = nx / n;
                map.orient_y.at(x, y) = ny / n;
            }
        }
    }
    return map;
}

}  // namespace curvireg
