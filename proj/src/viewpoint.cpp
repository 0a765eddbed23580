#include "curvireg/viewpoint.hpp"

#include <cmath>

#include "curvireg/errors.hpp"

namespace curvireg {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

Eigen::Vector3d Viewpoint::direction() const {
    const double h = elevation_deg * kDegToRad;
    const double a = azimuth_deg * kDegToRad;
    return {std::sin(h) * std::cos(a), std::sin(h) * std::sin(a), std::cos(h)};
}

Eigen::Matrix4d PoseTransform::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

PoseTransform PoseTransform::from_matrix(const Eigen::Matrix4d& m) {
    PoseTransform p;
    p.rotation = m.topLeftCorner<3, 3>();
    p.translation = m.topRightCorner<3, 1>();
    return p;
}

PoseTransform PoseTransform::inverse() const {
    PoseTransform p;
    p.rotation = rotation.transpose();
    p.translation = -(rotation.transpose() * translation);
    return p;
}

PoseTransform PoseTransform::compose(const PoseTransform& rhs) const {
    PoseTransform p;
    p.rotation = rotation * rhs.rotation;
    p.translation = rotation * rhs.translation + translation;
    return p;
}

Eigen::Vector3d PoseTransform::apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
}

PoseTransform viewpoint_to_pose(const Viewpoint& vp) {
    const Eigen::Vector3d dir = vp.direction();
    const Eigen::Vector3d center = vp.distance_m * dir;
    const Eigen::Vector3d forward = -dir;  // camera z axis, toward the origin

    Eigen::Vector3d up(0.0, 0.0, 1.0);
    if (forward.cross(up).norm() < 1e-9)
        up = Eigen::Vector3d(1.0, 0.0, 0.0);  // pole views

    const Eigen::Vector3d x_cam = forward.cross(up).normalized();
    const Eigen::Vector3d y_cam = forward.cross(x_cam);  // image y, pointing down

    PoseTransform pose;
    pose.rotation.row(0) = x_cam;
    pose.rotation.row(1) = y_cam;
    pose.rotation.row(2) = forward;
    pose.translation = -(pose.rotation * center);
    return pose;
}

std::vector<Viewpoint> sample_viewpoints(double h_step_deg, double a_step_deg, double v_min_m,
                                         double v_max_m, double v_step_m) {
    if (h_step_deg <= 0.0 || a_step_deg <= 0.0 || v_step_m <= 0.0)
        throw ParameterError("sample_viewpoints: steps must be positive");
    if (v_min_m <= 0.0 || v_min_m > v_max_m)
        throw ParameterError("sample_viewpoints: need 0 < v_min <= v_max");

    std::vector<double> hs, as, vs;
    for (double h = 0.0; h < 180.0 - 1e-9; h += h_step_deg)
        hs.push_back(h);
    for (double a = 0.0; a < 360.0 - 1e-9; a += a_step_deg)
        as.push_back(a);
    for (double v = v_min_m; v <= v_max_m + 1e-9; v += v_step_m)
        vs.push_back(v);
    if (hs.empty() || as.empty() || vs.empty())
        throw ParameterError("sample_viewpoints: empty grid");

    std::vector<Viewpoint> grid;
    grid.reserve(hs.size() * as.size() * vs.size());
    for (double h : hs)
        for (double a : as)
            for (double v : vs)
                grid.push_back(Viewpoint{h, a, v});
    return grid;
}

}  // namespace curvireg
