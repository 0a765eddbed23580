#include "curvireg/depth_render.hpp"

#include <cmath>

#include "curvireg/errors.hpp"

namespace curvireg {

int DepthImage::foreground_count() const {
    int n = 0;
    for (double v : depth.values())
        if (std::isfinite(v))
            ++n;
    return n;
}

double auto_pixel_scale(const Mesh& mesh, int image_size, double fill_fraction) {
    const double r = bounding_radius(mesh);
    if (r <= 0.0)
        throw GeometryError("auto_pixel_scale: mesh has zero extent");
    return 2.0 * r / (fill_fraction * image_size);
}

DepthImage render_depth(const Mesh& mesh, const Viewpoint& vp, int image_size,
                        double pixel_scale, double fill_fraction) {
    if (image_size < 2)
        throw ParameterError("render_depth: image_size too small");
    if (pixel_scale <= 0.0)
        pixel_scale = auto_pixel_scale(mesh, image_size, fill_fraction);

    DepthImage img;
    img.depth = ScalarField(image_size, image_size, DepthImage::kBackground);
    img.viewpoint = vp;
    img.pixel_scale = pixel_scale;

    const PoseTransform pose = viewpoint_to_pose(vp);
    const double cx = 0.5 * (image_size - 1);
    const double cy = 0.5 * (image_size - 1);

    std::vector<Eigen::Vector3d> cam(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        cam[i] = pose.apply(mesh.vertices[i]);
        cam[i].x() = cam[i].x() / pixel_scale + cx;
        cam[i].y() = cam[i].y() / pixel_scale + cy;
    }

    // Sequential z-buffer over the triangle list keeps the buffer bit-identical
    // run to run; view-level parallelism happens in the callers.
    for (const auto& tri : mesh.triangles) {
        const Eigen::Vector3d& a = cam[tri[0]];
        const Eigen::Vector3d& b = cam[tri[1]];
        const Eigen::Vector3d& c = cam[tri[2]];

        const double area = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        if (std::abs(area) < 1e-14)
            continue;  // edge-on

        const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x(), b.x(), c.x()}))));
        const int x1 = std::min(image_size - 1,
                                static_cast<int>(std::floor(std::max({a.x(), b.x(), c.x()}))));
        const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({a.y(), b.y(), c.y()}))));
        const int y1 = std::min(image_size - 1,
                                static_cast<int>(std::floor(std::max({a.y(), b.y(), c.y()}))));

        const double inv_area = 1.0 / area;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double w0 = ((b.x() - x) * (c.y() - y) - (b.y() - y) * (c.x() - x)) * inv_area;
                const double w1 = ((c.x() - x) * (a.y() - y) - (c.y() - y) * (a.x() - x)) * inv_area;
                const double w2 = 1.0 - w0 - w1;
                if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0)
                    continue;
                const double z = w0 * a.z() + w1 * b.z() + w2 * c.z();
                if (z > 0.0 && z < img.depth.at(x, y))
                    img.depth.at(x, y) = z;
            }
        }
    }
    return img;
}

}  // namespace curvireg
