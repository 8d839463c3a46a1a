#pragma once

#include <Eigen/Dense>

namespace hexcal {

using Vector6 = Eigen::Matrix<double, 6, 1>;

constexpr double kDegToRad = 0.017453292519943295;
constexpr double kRadToDeg = 57.29577951308232;

/// Normalize an angle in degrees to (-180, 180].
double normalize_angle_deg(double deg);

/// Difference a - b in degrees on the normalized branch.
double angle_diff_deg(double a, double b);

// 6-parameter pose of the lower grip center relative to its home pose.
// Translations in mm, rotations in degrees (roll about x, pitch about y,
// yaw about z). Angles are kept on the (-180, 180] branch.
struct PoseVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    static PoseVector home() { return {}; }

    bool is_finite() const;
    PoseVector normalized() const;

    Vector6 as_vector() const;
    static PoseVector from_vector(const Vector6& v);

    bool operator==(const PoseVector&) const = default;
};

struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidTransform identity() { return {}; }

    RigidTransform operator*(const RigidTransform& rhs) const {
        return {rotation * rhs.rotation, rotation * rhs.translation + translation};
    }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }

    /// Orthonormal with determinant +1, to tol.
    bool is_rigid(double tol = 1e-9) const;
};

Eigen::Matrix3d rot_x(double rad);
Eigen::Matrix3d rot_y(double rad);
Eigen::Matrix3d rot_z(double rad);

/// Fixed-axis roll-pitch-yaw: R = Rz(gamma) * Ry(beta) * Rx(alpha), t = (x, y, z).
RigidTransform pose_to_transform(const PoseVector& pose);

/// Inverse of pose_to_transform. Throws GimbalLockError when |cos beta| < 1e-9.
PoseVector transform_to_pose(const RigidTransform& t);

}  // namespace hexcal
