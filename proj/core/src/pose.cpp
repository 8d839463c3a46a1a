#include "hexcal/pose.hpp"

#include <cmath>

#include "hexcal/errors.hpp"

namespace hexcal {

double normalize_angle_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0) r += 360.0;
    else if (r > 180.0) r -= 360.0;
    return r;
}

double angle_diff_deg(double a, double b) {
    return normalize_angle_deg(a - b);
}

bool PoseVector::is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma);
}

PoseVector PoseVector::normalized() const {
    return {x, y, z, normalize_angle_deg(alpha), normalize_angle_deg(beta),
            normalize_angle_deg(gamma)};
}

Vector6 PoseVector::as_vector() const {
    Vector6 v;
    v << x, y, z, alpha, beta, gamma;
    return v;
}

PoseVector PoseVector::from_vector(const Vector6& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

bool RigidTransform::is_rigid(double tol) const {
    if (!rotation.allFinite() || !translation.allFinite()) return false;
    Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(rotation.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d rot_x(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Eigen::Matrix3d m;
    m << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return m;
}

Eigen::Matrix3d rot_y(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Eigen::Matrix3d m;
    m << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return m;
}

Eigen::Matrix3d rot_z(double rad) {
    const double c = std::cos(rad), s = std::sin(rad);
    Eigen::Matrix3d m;
    m << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return m;
}

RigidTransform pose_to_transform(const PoseVector& pose) {
    RigidTransform t;
    t.rotation = rot_z(pose.gamma * kDegToRad) * rot_y(pose.beta * kDegToRad) *
                 rot_x(pose.alpha * kDegToRad);
    t.translation = Eigen::Vector3d(pose.x, pose.y, pose.z);
    return t;
}

PoseVector transform_to_pose(const RigidTransform& t) {
    const Eigen::Matrix3d& r = t.rotation;
    // R = Rz(g) Ry(b) Rx(a) => r(2,0) = -sin(b)
    const double sb = -r(2, 0);
    const double cb = std::sqrt(r(0, 0) * r(0, 0) + r(1, 0) * r(1, 0));
    if (cb < 1e-9) {
        throw GimbalLockError("transform_to_pose: |beta| = 90 deg, decomposition non-unique");
    }
    PoseVector pose;
    pose.x = t.translation.x();
    pose.y = t.translation.y();
    pose.z = t.translation.z();
    pose.alpha = std::atan2(r(2, 1), r(2, 2)) * kRadToDeg;
    pose.beta = std::atan2(sb, cb) * kRadToDeg;
    pose.gamma = std::atan2(r(1, 0), r(0, 0)) * kRadToDeg;
    return pose.normalized();
}

}  // namespace hexcal
