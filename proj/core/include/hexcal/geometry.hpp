#pragma once

#include <array>

#include "hexcal/pose.hpp"

namespace hexcal {

// Per-parameter limits for the six pose parameters, order (x, y, z, alpha, beta, gamma).
struct PoseBounds {
    std::array<double, 6> min{};
    std::array<double, 6> max{};

    bool contains(const PoseVector& pose) const;
};

/// Pose parameter names in canonical order, for bound-violation messages.
extern const std::array<const char*, 6> kPoseParamNames;

// Joint layout and frame offsets of a 6-UPS platform.
//
// Frames: O_B at the fixed base center; O_P at the moving platform center;
// O_UG at the fixed upper grip (ug_offset from O_B); O_LG at the moving lower
// grip, a rigid fd along platform z above O_P. At home all z-axes are
// collinear and O_UG->O_LG equals gd_home.
struct PlatformGeometry {
    std::array<Eigen::Vector3d, 6> base_joints;      // universal joints, frame O_B (mm)
    std::array<Eigen::Vector3d, 6> platform_joints;  // spherical joints, frame O_P (mm)
    double leg_min = 0.0;                            // actuator limits (mm)
    double leg_max = 0.0;
    double fd = 0.0;       // O_P -> O_LG offset along platform z (mm)
    double gd_home = 0.0;  // home gauge distance O_UG -> O_LG (mm)
    Eigen::Vector3d ug_offset = Eigen::Vector3d::Zero();  // O_B -> O_UG (mm)
    PoseBounds pose_bounds;
    double singularity_tol = 1e-8;

    /// Home location of O_LG in the base frame: ug_offset - (0, 0, gd_home).
    Eigen::Vector3d lower_grip_home() const {
        return ug_offset - Eigen::Vector3d(0, 0, gd_home);
    }

    /// Home location of O_P in the base frame.
    Eigen::Vector3d platform_home() const {
        return lower_grip_home() - Eigen::Vector3d(0, 0, fd);
    }

    /// Throws InvalidatedGeometryError when an invariant fails
    /// (limits ordering, home legs outside limits, non-finite values).
    void validate() const;
};

// The shipped symmetric 6-6 reference geometry: base joints on a 400 mm circle
// (pairs straddling 0/120/240 deg with 15 deg half-spread), platform joints on
// a 250 mm circle rotated 60 deg, zigzag leg pairing. All values are plain
// configuration; load_geometry() reads the same fields from a file.
PlatformGeometry reference_geometry();

/// O_B -> O_LG transform for a lower-grip pose.
RigidTransform lower_grip_transform(const PoseVector& pose, const PlatformGeometry& geom);

/// O_B -> O_P transform implied by a lower-grip pose (composes the fixed fd offset).
RigidTransform grip_to_platform(const PoseVector& pose, const PlatformGeometry& geom);

}  // namespace hexcal
