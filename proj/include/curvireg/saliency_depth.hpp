#ifndef CURVIREG_SALIENCY_DEPTH_HPP
#define CURVIREG_SALIENCY_DEPTH_HPP

#include "curvireg/depth_render.hpp"
#include "curvireg/saliency.hpp"

namespace curvireg {

/// Per-pixel shape matrix of the depth surface:
///   M = [ (Zy^2+1) Zxx - Zx Zy Zxy   (Zy^2+1) Zxy - Zx Zy Zyy ]
///       [ (Zx^2+1) Zxy - Zx Zy Zxx   (Zx^2+1) Zyy - Zx Zy Zxy ]
/// with principal curvatures k_i = |grad Z| * lambda_i(-M), k1 >= k2.
struct DepthShapeField {
    ScalarField m11, m12, m21, m22;
    ScalarField grad_mag;
    ScalarField k1, k2;
    std::vector<uint8_t> valid;      // interior: foreground minus 1px dilated rim
    std::vector<uint8_t> rim;        // foreground pixels touching the background
    long complex_pixels = 0;         // discriminant clamped to zero (diagnostic)

    int width() const { return m11.width(); }
    int height() const { return m11.height(); }
};

DepthShapeField depth_shape_operator(const DepthImage& z, double sigma);

/// Curvilinear saliency of a depth image: value = k1 - k2, orientation the
/// image-plane eigenvector paired with lambda1(-M). Silhouette rim pixels are
/// assigned the 99th-percentile interior value with the silhouette normal as
/// orientation (the occluding contour is itself a ridge).
SaliencyMap curvilinear_saliency_depth(const DepthImage& z, double sigma);

}  // namespace curvireg

#endif
