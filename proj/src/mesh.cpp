#include "curvireg/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "curvireg/errors.hpp"

namespace curvireg {

namespace {

constexpr double kDegenerateArea = 1e-12;

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

// OBJ face vertex token: "3", "3/1", "3//2", "3/1/2"; negative counts from the end.
int resolve_index(const std::string& token, size_t vertex_count, const std::string& name,
                  int line_no) {
    const size_t slash = token.find('/');
    const std::string head = (slash == std::string::npos) ? token : token.substr(0, slash);
    int idx = 0;
    try {
        idx = std::stoi(head);
    } catch (const std::exception&) {
        throw ParseError(name + ":" + std::to_string(line_no) + ": bad face index '" + token +
                         "'");
    }
    if (idx < 0)
        idx = static_cast<int>(vertex_count) + idx;  // -1 is the last vertex
    else
        idx -= 1;
    if (idx < 0 || idx >= static_cast<int>(vertex_count))
        throw ParseError(name + ":" + std::to_string(line_no) + ": face index out of range");
    return idx;
}

}  // namespace

Mesh parse_obj(const std::string& text, const std::string& name) {
    Mesh mesh;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    size_t dropped = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#')
            continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw ParseError(name + ":" + std::to_string(line_no) + ": malformed vertex");
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ls >> token)
                idx.push_back(resolve_index(token, mesh.vertices.size(), name, line_no));
            if (idx.size() < 3)
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": face needs at least 3 vertices");
            for (size_t k = 2; k < idx.size(); ++k) {  // fan triangulation
                const std::array<int, 3> tri{idx[0], idx[static_cast<int>(k) - 1],
                                             idx[static_cast<int>(k)]};
                if (triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                  mesh.vertices[tri[2]]) > kDegenerateArea)
                    mesh.triangles.push_back(tri);
                else
                    ++dropped;
            }
        }
        // vn, vt, usemtl, o, g, s, mtllib: ignored
    }
    if (mesh.triangles.empty())
        throw GeometryError(name + ": mesh has no non-degenerate triangles");
    (void)dropped;
    return mesh;
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open mesh file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_obj(buf.str(), path);
}

void save_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write mesh file: " + path);
    out.precision(17);
    for (const auto& v : mesh.vertices)
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    if (!out)
        throw IoError("short write: " + path);
}

std::pair<Mesh, PoseTransform> pca_normalize(const Mesh& mesh) {
    const size_t n = mesh.vertices.size();
    if (n < 3)
        throw GeometryError("pca_normalize: need at least 3 vertices");

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& v : mesh.vertices)
        centroid += v;
    centroid /= static_cast<double>(n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& v : mesh.vertices) {
        const Eigen::Vector3d d = v - centroid;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.info() != Eigen::Success)
        throw NumericError("pca_normalize: eigen decomposition failed");
    // Ascending eigenvalues; rank deficiency in the top two axes means the
    // points are collinear and there is no plane to align.
    if (eig.eigenvalues()(1) < 1e-12 * std::max(eig.eigenvalues()(2), 1e-300))
        throw GeometryError("pca_normalize: degenerate geometry (collinear vertices)");

    std::array<Eigen::Vector3d, 2> axes{eig.eigenvectors().col(2), eig.eigenvectors().col(1)};
    for (auto& axis : axes) {
        double m3 = 0.0;
        for (const auto& v : mesh.vertices) {
            const double d = axis.dot(v - centroid);
            m3 += d * d * d;
        }
        if (m3 < 0.0) {
            axis = -axis;
        } else if (m3 == 0.0) {
            // Symmetric shape: orient toward the first vertex with a nonzero
            // projection (lexicographic vertex order breaks the tie).
            for (const auto& v : mesh.vertices) {
                const double d = axis.dot(v - centroid);
                if (std::abs(d) > 1e-12) {
                    if (d < 0.0)
                        axis = -axis;
                    break;
                }
            }
        }
    }

    PoseTransform tf;
    tf.rotation.row(0) = axes[0];
    tf.rotation.row(1) = axes[1];
    tf.rotation.row(2) = axes[0].cross(axes[1]);  // right-handed, det = +1
    tf.translation = -(tf.rotation * centroid);

    Mesh out = mesh;
    for (auto& v : out.vertices)
        v = tf.apply(v);
    return {std::move(out), tf};
}

double bounding_radius(const Mesh& mesh) {
    double r = 0.0;
    for (const auto& v : mesh.vertices)
        r = std::max(r, v.norm());
    return r;
}

}  // namespace curvireg
