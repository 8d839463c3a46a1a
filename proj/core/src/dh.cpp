#include "hexcal/dh.hpp"

#include <cmath>

#include "hexcal/errors.hpp"

namespace hexcal {

namespace {

constexpr double kAxisDegeneracyTol = 1e-9;

// ZYX Euler extraction: M = Rz(a) * Ry(b) * Rx(c). Throws at gimbal lock.
void euler_zyx(const Eigen::Matrix3d& m, double& a, double& b, double& c) {
    const double sb = -m(2, 0);
    const double cb = std::sqrt(m(0, 0) * m(0, 0) + m(1, 0) * m(1, 0));
    if (cb < kAxisDegeneracyTol) {
        throw SingularPoseError("extract_dh_chain: spherical joint at gimbal lock");
    }
    a = std::atan2(m(1, 0), m(0, 0));
    b = std::atan2(sb, cb);
    c = std::atan2(m(2, 1), m(2, 2));
}

}  // namespace

DHChain extract_dh_chain(const PoseVector& pose, const PlatformGeometry& geom, int leg) {
    if (leg < 0 || leg > 5) throw InvalidInputError("extract_dh_chain: leg index out of range");
    if (!pose.is_finite()) throw InvalidInputError("extract_dh_chain: non-finite pose");

    const RigidTransform lg = lower_grip_transform(pose, geom);
    const Eigen::Vector3d fd_offset(0, 0, geom.fd);
    const Eigen::Vector3d b = geom.base_joints[leg];
    const Eigen::Vector3d q = lg.apply(geom.platform_joints[leg] - fd_offset);

    const Eigen::Vector3d leg_vec = q - b;
    const double length = leg_vec.norm();
    if (length < kAxisDegeneracyTol) {
        throw SingularPoseError("extract_dh_chain: zero-length leg");
    }
    const Eigen::Vector3d u = leg_vec / length;

    // Universal joint: Rx(t1) * Ry(t2) maps z to the leg direction.
    if (1.0 - std::abs(u.x()) < kAxisDegeneracyTol) {
        throw SingularPoseError("extract_dh_chain: leg aligned with universal x axis");
    }
    const double t2 = std::asin(u.x());
    const double t1 = std::atan2(-u.y(), u.z());
    const Eigen::Matrix3d ru = rot_x(t1) * rot_y(t2);

    // Spherical joint: Rz(t4) * Ry(t5) * Rx(t6) closes the orientation gap.
    double t4, t5, t6;
    euler_zyx(ru.transpose() * lg.rotation, t4, t5, t6);

    DHChain chain;
    chain.leg_index = leg;
    chain.rows[0] = {t1 * kRadToDeg, 0.0, 0.0, 0.0};
    chain.rows[1] = {t2 * kRadToDeg - 90.0, 0.0, 0.0, -90.0};
    chain.rows[2] = {0.0, length, 0.0, 90.0};
    chain.rows[3] = {t4 * kRadToDeg, 0.0, 0.0, 0.0};
    chain.rows[4] = {t5 * kRadToDeg + 90.0, 0.0, 0.0, -90.0};
    chain.rows[5] = {t6 * kRadToDeg, 0.0, 0.0, 90.0};
    chain.base_anchor = {rot_y(90.0 * kDegToRad), b};
    const Eigen::Matrix3d tool_rot = rot_y(-90.0 * kDegToRad);
    chain.tool_anchor = {tool_rot, tool_rot * (fd_offset - geom.platform_joints[leg])};
    return chain;
}

RigidTransform chain_forward(const DHChain& chain) {
    RigidTransform t = chain.base_anchor;
    for (const DHRow& row : chain.rows) {
        const RigidTransform step{
            rot_x(row.alpha_link * kDegToRad) * rot_z(row.theta * kDegToRad),
            rot_x(row.alpha_link * kDegToRad) * Eigen::Vector3d(row.a, 0.0, 0.0)};
        t = t * step;
        t.translation += t.rotation * Eigen::Vector3d(0.0, 0.0, row.d);
    }
    return t * chain.tool_anchor;
}

Eigen::Vector3d unify_positions(const std::array<Eigen::Vector3d, 6>& positions) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& p : positions) {
        if (!p.allFinite()) throw InvalidInputError("unify_positions: non-finite position");
        sum += p;
    }
    return sum / 6.0;
}

}  // namespace hexcal
