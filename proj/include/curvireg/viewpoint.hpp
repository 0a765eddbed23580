#ifndef CURVIREG_VIEWPOINT_HPP
#define CURVIREG_VIEWPOINT_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace curvireg {

/// Camera placement on a sphere around the object: elevation h is the polar
/// angle from +z in degrees, azimuth a turns about +z, distance v in meters.
struct Viewpoint {
    double elevation_deg = 90.0;  // in [0, 180)
    double azimuth_deg = 0.0;     // in [0, 360)
    double distance_m = 1.0;      // > 0

    /// Unit vector from the origin toward the camera.
    Eigen::Vector3d direction() const;
};

/// Rigid world-to-camera transform stored as a 4x4 homogeneous matrix.
struct PoseTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Matrix4d matrix() const;
    static PoseTransform from_matrix(const Eigen::Matrix4d& m);
    PoseTransform inverse() const;
    PoseTransform compose(const PoseTransform& rhs) const;  // this * rhs
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const;
};

/// World-to-camera transform of the rendering convention: camera at
/// v * direction(h, a) looking at the origin, image y pointing down, world +z
/// projecting "up" in the image (+x fallback at the poles).
PoseTransform viewpoint_to_pose(const Viewpoint& vp);

/// Cartesian (h, a, v) grid; h outer, a middle, v inner. Elevation covers
/// [0, 180), azimuth [0, 360), distance [v_min, v_max].
std::vector<Viewpoint> sample_viewpoints(double h_step_deg, double a_step_deg, double v_min_m,
                                         double v_max_m, double v_step_m);

}  // namespace curvireg

#endif
