#ifndef CURVIREG_MESH_HPP
#define CURVIREG_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "curvireg/viewpoint.hpp"

namespace curvireg {

/// Triangle mesh in meters. Faces with area below 1e-12 are dropped at load.
struct Mesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;

    size_t vertex_count() const { return vertices.size(); }
    size_t triangle_count() const { return triangles.size(); }
};

/// Wavefront OBJ loader: v/f records, 1-based and negative indices, quads and
/// larger polygons fan-triangulated. Other record types are ignored.
Mesh load_mesh(const std::string& path);
Mesh parse_obj(const std::string& text, const std::string& name);
void save_obj(const Mesh& mesh, const std::string& path);

/// Moves the centroid to the origin and aligns the principal axes with x
/// (major) and y (second). Axis signs are fixed by the third moment of the
/// vertex coordinates; the returned transform is the applied rigid motion
/// x' = R (x - centroid), with det(R) = +1.
std::pair<Mesh, PoseTransform> pca_normalize(const Mesh& mesh);

/// Radius of the centered bounding sphere (max vertex norm).
double bounding_radius(const Mesh& mesh);

}  // namespace curvireg

#endif
