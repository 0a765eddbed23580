#ifndef CURVIREG_DEPTH_RENDER_HPP
#define CURVIREG_DEPTH_RENDER_HPP

#include <limits>

#include "curvireg/mesh.hpp"
#include "curvireg/scalar_field.hpp"
#include "curvireg/viewpoint.hpp"

namespace curvireg {

/// Depth along the view axis per pixel; background pixels carry +infinity.
struct DepthImage {
    ScalarField depth;
    Viewpoint viewpoint;
    double pixel_scale = 0.0;  // meters per pixel

    static constexpr double kBackground = std::numeric_limits<double>::infinity();

    bool is_background(int x, int y) const { return !std::isfinite(depth.at(x, y)); }
    int foreground_count() const;
};

/// Orthographic z-buffer rasterization, top-left origin, y down, pixel centers
/// at integer coordinates with the optical axis through ((w-1)/2, (h-1)/2).
/// pixel_scale <= 0 picks the scale that fits the mesh bounding sphere into
/// fill_fraction of the frame. Deterministic: single-threaded triangle loop.
DepthImage render_depth(const Mesh& mesh, const Viewpoint& vp, int image_size,
                        double pixel_scale = 0.0, double fill_fraction = 0.8);

/// Scale used by render_depth when pixel_scale is left automatic.
double auto_pixel_scale(const Mesh& mesh, int image_size, double fill_fraction = 0.8);

}  // namespace curvireg

#endif
