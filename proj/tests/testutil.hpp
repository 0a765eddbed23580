#ifndef CURVIREG_TESTUTIL_HPP
#define CURVIREG_TESTUTIL_HPP

#include <cstdint>
#include <random>
#include <string>

#include "curvireg/depth_render.hpp"
#include "curvireg/mesh.hpp"
#include "curvireg/saliency_image.hpp"

namespace curvireg::testutil {

// Procedural primitives, coarse enough that faceting is visible to the
// detectors (a perfectly round sphere would make every view identical).
Mesh make_sphere(double radius = 1.0, int n_lon = 20, int n_lat = 10);
Mesh make_box(double ax = 1.6, double ay = 1.0, double az = 0.7, int sub = 4);
Mesh make_cylinder(double radius = 0.5, double height = 1.6, int n_seg = 24, int n_h = 6);
Mesh make_torus(double major = 0.8, double minor = 0.3, int nu = 24, int nv = 12);
Mesh make_blob(double radius = 1.0, int n_lon = 24, int n_lat = 12);

/// Flat Lambertian shading with a fixed parallel light; the synthetic query
/// stand-in for a photograph. Background is a constant gray.
IntensityImage shaded_render(const Mesh& mesh, const Viewpoint& vp, int image_size,
                             double pixel_scale, double background = 0.08);

/// Analytic blurred vertical edge: I(x) = lo + (hi-lo) * Phi((x - x0)/sigma).
IntensityImage blurred_edge_image(int width, int height, double x0, double sigma,
                                  double lo = 0.1, double hi = 0.9);

/// 2x2-block checkerboard patch plus one strong vertical edge; the texture
/// suppression synthetic. Fine texture sits in [tex_x0, tex_x1) x [8, h-8),
/// the sharp edge at edge_x.
struct CheckerEdgeImage {
    IntensityImage image;
    int tex_x0 = 8, tex_x1 = 56;
    int edge_x = 96;
};
CheckerEdgeImage checker_edge_image(int width = 128, int height = 96);

/// Sharp foreground square over sigma=3 blurred background stripes, with the
/// ground-truth edge pixel sets of both layers.
struct FgBgSynthetic {
    IntensityImage image;
    std::vector<std::pair<int, int>> fg_edges;  // (x, y) on the square rim
    std::vector<std::pair<int, int>> bg_edges;  // (x, y) on stripe transitions
};
FgBgSynthetic fgbg_synthetic(int size = 160);

/// Filled sharp ellipse on a flat background (the all-in-focus silhouette).
IntensityImage silhouette_image(int size = 256, double rx = 60.0, double ry = 44.0);

uint64_t fnv1a(const std::string& bytes);
uint64_t hash_file(const std::string& path);

/// Fresh scratch directory under the system temp root.
std::string scratch_dir(const std::string& tag);

}  // namespace curvireg::testutil

#endif
