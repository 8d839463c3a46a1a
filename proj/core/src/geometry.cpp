#include "hexcal/geometry.hpp"

#include <cmath>

#include "hexcal/errors.hpp"
#include "hexcal/kinematics.hpp"

namespace hexcal {

const std::array<const char*, 6> kPoseParamNames = {"x", "y", "z", "alpha", "beta", "gamma"};

bool PoseBounds::contains(const PoseVector& pose) const {
    const Vector6 v = pose.as_vector();
    for (int k = 0; k < 6; ++k) {
        if (v[k] < min[k] || v[k] > max[k]) return false;
    }
    return true;
}

void PlatformGeometry::validate() const {
    for (const auto& j : base_joints) {
        if (!j.allFinite()) throw InvalidatedGeometryError("geometry: non-finite base joint");
    }
    for (const auto& j : platform_joints) {
        if (!j.allFinite()) throw InvalidatedGeometryError("geometry: non-finite platform joint");
    }
    if (!(leg_min > 0.0) || !(leg_max > leg_min)) {
        throw InvalidatedGeometryError("geometry: requires 0 < leg_min < leg_max");
    }
    if (!(fd >= 0.0)) throw InvalidatedGeometryError("geometry: fd must be >= 0");
    if (!(gd_home > 0.0)) throw InvalidatedGeometryError("geometry: gd_home must be > 0");
    if (!ug_offset.allFinite()) throw InvalidatedGeometryError("geometry: non-finite ug_offset");
    if (!(singularity_tol > 0.0)) {
        throw InvalidatedGeometryError("geometry: singularity_tol must be > 0");
    }
    for (int k = 0; k < 6; ++k) {
        if (!(pose_bounds.min[k] <= pose_bounds.max[k])) {
            throw InvalidatedGeometryError("geometry: pose_bounds min > max");
        }
    }
    const LegLengths home = inverse_kinematics(PoseVector::home(), *this);
    for (int i = 0; i < 6; ++i) {
        if (home.lengths[i] < leg_min || home.lengths[i] > leg_max) {
            throw InvalidatedGeometryError("geometry: home leg length outside [leg_min, leg_max]");
        }
    }
}

PlatformGeometry reference_geometry() {
    constexpr double base_radius = 400.0;
    constexpr double platform_radius = 250.0;
    // Zigzag pairing: leg i joins base azimuth b[i] to platform azimuth p[i].
    constexpr std::array<double, 6> base_az = {-15.0, 15.0, 105.0, 135.0, 225.0, 255.0};
    constexpr std::array<double, 6> plat_az = {-45.0, 45.0, 75.0, 165.0, 195.0, 285.0};

    PlatformGeometry g;
    for (int i = 0; i < 6; ++i) {
        const double b = base_az[i] * kDegToRad;
        const double p = plat_az[i] * kDegToRad;
        g.base_joints[i] = base_radius * Eigen::Vector3d(std::cos(b), std::sin(b), 0.0);
        g.platform_joints[i] = platform_radius * Eigen::Vector3d(std::cos(p), std::sin(p), 0.0);
    }
    g.leg_min = 500.0;
    g.leg_max = 800.0;
    g.fd = 100.0;
    g.gd_home = 50.0;
    g.ug_offset = Eigen::Vector3d(0.0, 0.0, 760.0);  // home platform center at z = 610
    g.pose_bounds.min = {-40.0, -40.0, -40.0, -12.0, -12.0, -12.0};
    g.pose_bounds.max = {40.0, 40.0, 40.0, 12.0, 12.0, 12.0};
    g.singularity_tol = 1e-8;
    return g;
}

RigidTransform lower_grip_transform(const PoseVector& pose, const PlatformGeometry& geom) {
    RigidTransform t = pose_to_transform(pose);
    t.translation += geom.lower_grip_home();
    return t;
}

RigidTransform grip_to_platform(const PoseVector& pose, const PlatformGeometry& geom) {
    const RigidTransform lg = lower_grip_transform(pose, geom);
    const RigidTransform lg_to_p{Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, -geom.fd)};
    return lg * lg_to_p;
}

}  // namespace hexcal
