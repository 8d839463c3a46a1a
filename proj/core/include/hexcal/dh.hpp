#pragma once

#include <array>

#include "hexcal/geometry.hpp"
#include "hexcal/pose.hpp"

namespace hexcal {

// One modified-DH row: T = Rx(alpha_link) * Tx(a) * Rz(theta) * Tz(d).
// Angles in degrees, lengths in mm.
struct DHRow {
    double theta = 0.0;
    double d = 0.0;
    double a = 0.0;
    double alpha_link = 0.0;
};

// Serial-chain description of one UPS actuator path, O_B -> O_LG.
//
// Row layout (joint variables marked *):
//   0  universal axis 1   theta* (about base-frame x)
//   1  universal axis 2   theta* (about the moved y; -90 structural offset)
//   2  prismatic          d*     (the leg length; no structural offset)
//   3  spherical axis 1   theta*
//   4  spherical axis 2   theta* (+90 structural offset)
//   5  spherical axis 3   theta*
// All a are 0 and all alpha_link are in {0, -90, +90}: consecutive joint axes
// intersect, so the structural columns are pose-invariant. The anchors absorb
// the constant base-joint and platform-joint offsets.
struct DHChain {
    int leg_index = 0;
    std::array<DHRow, 6> rows;
    RigidTransform base_anchor;  // O_B -> first joint frame
    RigidTransform tool_anchor;  // last joint frame -> O_LG
};

/// Index of the prismatic row within DHChain::rows.
inline constexpr int kPrismaticRow = 2;

// Extracts the unique chain whose forward evaluation reproduces the
// O_B -> O_LG transform of the pose. Throws SingularPoseError when a joint
// angle extraction is degenerate (leg along the universal x axis, or
// spherical gimbal lock).
DHChain extract_dh_chain(const PoseVector& pose, const PlatformGeometry& geom, int leg);

/// base_anchor * product of modified-DH row transforms * tool_anchor.
RigidTransform chain_forward(const DHChain& chain);

/// Component-wise arithmetic mean of the six per-path position vectors.
Eigen::Vector3d unify_positions(const std::array<Eigen::Vector3d, 6>& positions);

}  // namespace hexcal
