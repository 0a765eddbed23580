#include "testutil.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "curvireg/errors.hpp"

namespace fs = std::filesystem;

namespace curvireg::testutil {

namespace {

void push_quad(Mesh& m, int a, int b, int c, int d) {
    m.triangles.push_back({a, b, c});
    m.triangles.push_back({a, c, d});
}

void drop_degenerate(Mesh& m) {
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : m.triangles) {
        const Eigen::Vector3d e1 = m.vertices[t[1]] - m.vertices[t[0]];
        const Eigen::Vector3d e2 = m.vertices[t[2]] - m.vertices[t[0]];
        if (0.5 * e1.cross(e2).norm() > 1e-12)
            kept.push_back(t);
    }
    m.triangles = std::move(kept);
}

Mesh lattice_of_revolution(int n_lon, int n_lat,
                           const std::function<Eigen::Vector3d(double, double)>& surf) {
    // theta: polar 0..pi (n_lat+1 rows), phi: azimuth 0..2pi (n_lon columns)
    Mesh m;
    for (int i = 0; i <= n_lat; ++i) {
        const double theta = M_PI * i / n_lat;
        for (int j = 0; j < n_lon; ++j) {
            const double phi = 2.0 * M_PI * j / n_lon;
            m.vertices.push_back(surf(theta, phi));
        }
    }
    auto vid = [&](int i, int j) { return i * n_lon + (j % n_lon); };
    for (int i = 0; i < n_lat; ++i)
        for (int j = 0; j < n_lon; ++j)
            push_quad(m, vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j));
    drop_degenerate(m);
    return m;
}

}  // namespace

Mesh make_sphere(double radius, int n_lon, int n_lat) {
    return lattice_of_revolution(n_lon, n_lat, [&](double t, double p) {
        return Eigen::Vector3d(radius * std::sin(t) * std::cos(p),
                               radius * std::sin(t) * std::sin(p), radius * std::cos(t));
    });
}

Mesh make_blob(double radius, int n_lon, int n_lat) {
    return lattice_of_revolution(n_lon, n_lat, [&](double t, double p) {
        const double r = radius * (1.0 + 0.18 * std::sin(3.0 * p) * std::sin(2.0 * t) +
                                   0.12 * std::cos(2.0 * p + 0.7) * std::sin(t) +
                                   0.07 * std::cos(4.0 * t));
        return Eigen::Vector3d(r * std::sin(t) * std::cos(p), r * std::sin(t) * std::sin(p),
                               r * std::cos(t));
    });
}

Mesh make_box(double ax, double ay, double az, int sub) {
    Mesh m;
    const double hx = ax / 2, hy = ay / 2, hz = az / 2;
    // Six faces, each an n x n grid; duplicated edge vertices are harmless.
    auto face = [&](const Eigen::Vector3d& origin, const Eigen::Vector3d& du,
                    const Eigen::Vector3d& dv) {
        const int base = static_cast<int>(m.vertices.size());
        for (int i = 0; i <= sub; ++i)
            for (int j = 0; j <= sub; ++j)
                m.vertices.push_back(origin + du * (static_cast<double>(i) / sub) +
                                     dv * (static_cast<double>(j) / sub));
        for (int i = 0; i < sub; ++i)
            for (int j = 0; j < sub; ++j) {
                const int a = base + i * (sub + 1) + j;
                push_quad(m, a, a + 1, a + sub + 2, a + sub + 1);
            }
    };
    face({-hx, -hy, hz}, {2 * hx, 0, 0}, {0, 2 * hy, 0});    // +z
    face({-hx, -hy, -hz}, {0, 2 * hy, 0}, {2 * hx, 0, 0});   // -z
    face({hx, -hy, -hz}, {0, 2 * hy, 0}, {0, 0, 2 * hz});    // +x
    face({-hx, -hy, -hz}, {0, 0, 2 * hz}, {0, 2 * hy, 0});   // -x
    face({-hx, hy, -hz}, {2 * hx, 0, 0}, {0, 0, 2 * hz});    // +y
    face({-hx, -hy, -hz}, {0, 0, 2 * hz}, {2 * hx, 0, 0});   // -y
    drop_degenerate(m);
    return m;
}

Mesh make_cylinder(double radius, double height, int n_seg, int n_h) {
    Mesh m;
    const double hz = height / 2;
    for (int i = 0; i <= n_h; ++i) {
        const double z = -hz + height * i / n_h;
        for (int j = 0; j < n_seg; ++j) {
            const double p = 2.0 * M_PI * j / n_seg;
            m.vertices.push_back({radius * std::cos(p), radius * std::sin(p), z});
        }
    }
    auto vid = [&](int i, int j) { return i * n_seg + (j % n_seg); };
    for (int i = 0; i < n_h; ++i)
        for (int j = 0; j < n_seg; ++j)
            push_quad(m, vid(i, j), vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j));
    // caps
    const int c0 = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0, 0, -hz});
    const int c1 = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0, 0, hz});
    for (int j = 0; j < n_seg; ++j) {
        m.triangles.push_back({c0, vid(0, j + 1), vid(0, j)});
        m.triangles.push_back({c1, vid(n_h, j), vid(n_h, j + 1)});
    }
    drop_degenerate(m);
    return m;
}

Mesh make_torus(double major, double minor, int nu, int nv) {
    Mesh m;
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * M_PI * j / nv;
            const double r = major + minor * std::cos(v);
            m.vertices.push_back({r * std::cos(u), r * std::sin(u), minor * std::sin(v)});
        }
    }
    auto vid = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j)
            push_quad(m, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
    drop_degenerate(m);
    return m;
}

IntensityImage shaded_render(const Mesh& mesh, const Viewpoint& vp, int image_size,
                             double pixel_scale, double background) {
    const PoseTransform pose = viewpoint_to_pose(vp);
    const double cx = 0.5 * (image_size - 1);
    const double cy = 0.5 * (image_size - 1);
    const Eigen::Vector3d light = Eigen::Vector3d(0.4, -0.3, -0.85).normalized();

    std::vector<Eigen::Vector3d> cam(mesh.vertices.size());
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        cam[i] = pose.apply(mesh.vertices[i]);
        cam[i].x() = cam[i].x() / pixel_scale + cx;
        cam[i].y() = cam[i].y() / pixel_scale + cy;
    }

    ScalarField zbuf(image_size, image_size, std::numeric_limits<double>::infinity());
    IntensityImage img;
    img.values = ScalarField(image_size, image_size, background);

    for (const auto& tri : mesh.triangles) {
        const Eigen::Vector3d& a = cam[tri[0]];
        const Eigen::Vector3d& b = cam[tri[1]];
        const Eigen::Vector3d& c = cam[tri[2]];
        const double area = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
        if (std::abs(area) < 1e-14)
            continue;

        // Camera-space facet normal, flipped toward the camera.
        Eigen::Vector3d n = (Eigen::Vector3d(b.x() - a.x(), b.y() - a.y(), b.z() - a.z()))
                                .cross(Eigen::Vector3d(c.x() - a.x(), c.y() - a.y(), c.z() - a.z()));
        n.x() *= pixel_scale;
        n.y() *= pixel_scale;  // undo the anisotropic pixel mapping
        if (n.norm() < 1e-18)
            continue;
        n.normalize();
        if (n.z() > 0.0)
            n = -n;
        const double shade =
            std::clamp(0.15 + 0.85 * std::max(0.0, -n.dot(light)), 0.0, 1.0);

        const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x(), b.x(), c.x()}))));
        const int x1 = std::min(image_size - 1,
                                static_cast<int>(std::floor(std::max({a.x(), b.x(), c.x()}))));
        const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({a.y(), b.y(), c.y()}))));
        const int y1 = std::min(image_size - 1,
                                static_cast<int>(std::floor(std::max({a.y(), b.y(), c.y()}))));
        const double inv_area = 1.0 / area;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double w0 =
                    ((b.x() - x) * (c.y() - y) - (b.y() - y) * (c.x() - x)) * inv_area;
                const double w1 =
                    ((c.x() - x) * (a.y() - y) - (c.y() - y) * (a.x() - x)) * inv_area;
                const double w2 = 1.0 - w0 - w1;
                if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0)
                    continue;
                const double z = w0 * a.z() + w1 * b.z() + w2 * c.z();
                if (z > 0.0 && z < zbuf.at(x, y)) {
                    zbuf.at(x, y) = z;
                    img.values.at(x, y) = shade;
                }
            }
    }
    return img;
}

IntensityImage blurred_edge_image(int width, int height, double x0, double sigma, double lo,
                                  double hi) {
    IntensityImage img;
    img.values = ScalarField(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double z = (x - x0) / (sigma * std::sqrt(2.0));
            img.values.at(x, y) = lo + (hi - lo) * 0.5 * (1.0 + std::erf(z));
        }
    return img;
}

CheckerEdgeImage checker_edge_image(int width, int height) {
    CheckerEdgeImage out;
    out.image.values = ScalarField(width, height, 0.4);
    for (int y = 8; y < height - 8; ++y)
        for (int x = out.tex_x0; x < out.tex_x1; ++x) {
            const bool dark = ((x / 2) + (y / 2)) % 2 == 0;
            out.image.values.at(x, y) = dark ? 0.3 : 0.5;
        }
    for (int y = 0; y < height; ++y)
        for (int x = out.edge_x; x < width; ++x)
            out.image.values.at(x, y) = 1.0;
    return out;
}

FgBgSynthetic fgbg_synthetic(int size) {
    FgBgSynthetic out;
    out.image.values = ScalarField(size, size);
    const std::vector<int> stripes = {16, 44, 80, 116, 144};
    const double blur = 3.0;
    // Background: alternating stripe levels, each transition an erf ramp.
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double v = 0.25;
            double level = 0.5;
            for (int sx : stripes) {
                const double z = (x - sx) / (blur * std::sqrt(2.0));
                v += level * 0.5 * (1.0 + std::erf(z));
                level = -level;  // up, down, up, ...
            }
            out.image.values.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    // Sharp foreground square on top.
    const int lo = 60, hi = 100;
    for (int y = lo; y <= hi; ++y)
        for (int x = lo; x <= hi; ++x)
            out.image.values.at(x, y) = 0.95;
    // Ground truth: the square rim (corners excluded)...
    for (int t = lo + 3; t <= hi - 3; ++t) {
        out.fg_edges.push_back({lo, t});
        out.fg_edges.push_back({hi, t});
        out.fg_edges.push_back({t, lo});
        out.fg_edges.push_back({t, hi});
    }
    // ... and stripe centers outside the square, clear of frame and square.
    for (int sx : stripes)
        for (int y = 8; y < size - 8; ++y) {
            const bool inside_rows = (y >= lo - 6 && y <= hi + 6);
            const bool behind_square = (sx >= lo - 6 && sx <= hi + 6);
            if (inside_rows && behind_square)
                continue;
            if (inside_rows && !behind_square && sx >= lo - 20 && sx <= hi + 20)
                continue;  // too close to the vertical rim
            out.bg_edges.push_back({sx, y});
        }
    return out;
}

IntensityImage silhouette_image(int size, double rx, double ry) {
    IntensityImage img;
    img.values = ScalarField(size, size, 0.15);
    const double c = 0.5 * (size - 1);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double u = (x - c) / rx;
            const double v = (y - c) / ry;
            if (u * u + v * v <= 1.0)
                img.values.at(x, y) = 0.85;
        }
    return img;
}

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("hash_file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a(buf.str());
}

std::string scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("curvireg_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

}  // namespace curvireg::testutil
