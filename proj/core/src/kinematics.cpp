#include "hexcal/kinematics.hpp"

#include <cmath>

#include "hexcal/errors.hpp"

namespace hexcal {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
         -v.y(), v.x(), 0;
    return m;
}

// Leg vectors share this decomposition: v_i = R * r_i + t_lg - b_i with
// r_i = p_i - (0, 0, fd) the platform joint seen from O_LG.
struct LegFrame {
    Eigen::Matrix3d rotation;
    Eigen::Vector3d t_lg;
};

LegFrame leg_frame(const PoseVector& pose, const PlatformGeometry& geom) {
    const RigidTransform lg = lower_grip_transform(pose, geom);
    return {lg.rotation, lg.translation};
}

}  // namespace

LegLengths inverse_kinematics(const PoseVector& pose, const PlatformGeometry& geom) {
    if (!pose.is_finite()) throw InvalidInputError("inverse_kinematics: non-finite pose");
    const LegFrame f = leg_frame(pose, geom);
    const Eigen::Vector3d fd_offset(0, 0, geom.fd);
    LegLengths out;
    out.valid = true;
    for (int i = 0; i < 6; ++i) {
        const Eigen::Vector3d r = geom.platform_joints[i] - fd_offset;
        const double len = (f.rotation * r + f.t_lg - geom.base_joints[i]).norm();
        out.lengths[i] = len;
        if (len < geom.leg_min || len > geom.leg_max) out.valid = false;
    }
    return out;
}

JacobianMatrix jacobian(const PoseVector& pose, const PlatformGeometry& geom) {
    if (!pose.is_finite()) throw InvalidInputError("jacobian: non-finite pose");
    const double a = pose.alpha * kDegToRad;
    const double b = pose.beta * kDegToRad;
    const double g = pose.gamma * kDegToRad;
    const Eigen::Matrix3d rx = rot_x(a);
    const Eigen::Matrix3d r = rot_z(g) * rot_y(b) * rx;

    // d/d(angle) of R = Rz Ry Rx, written as R * [axis]x with the axis pulled
    // back through the trailing factors; converted to per-degree below.
    const std::array<Eigen::Matrix3d, 3> dr = {
        r * skew(Eigen::Vector3d::UnitX()),
        r * skew(rx.transpose() * Eigen::Vector3d::UnitY()),
        r * skew(r.transpose() * Eigen::Vector3d::UnitZ()),
    };

    const Eigen::Vector3d t_lg =
        geom.lower_grip_home() + Eigen::Vector3d(pose.x, pose.y, pose.z);
    const Eigen::Vector3d fd_offset(0, 0, geom.fd);

    JacobianMatrix jac;
    for (int i = 0; i < 6; ++i) {
        const Eigen::Vector3d ri = geom.platform_joints[i] - fd_offset;
        const Eigen::Vector3d v = r * ri + t_lg - geom.base_joints[i];
        const Eigen::Vector3d u = v.normalized();
        jac.block<1, 3>(i, 0) = u.transpose();
        for (int k = 0; k < 3; ++k) {
            jac(i, 3 + k) = u.dot(dr[k] * ri) * kDegToRad;
        }
    }
    return jac;
}

double normalized_jacobian_det(const PoseVector& pose, const PlatformGeometry& geom) {
    const JacobianMatrix j = jacobian(pose, geom);
    double scale = 1.0;
    for (int i = 0; i < 6; ++i) scale *= j.row(i).norm();
    if (scale == 0.0) return 0.0;
    return std::abs(j.determinant()) / scale;
}

bool is_singular(const PoseVector& pose, const PlatformGeometry& geom) {
    return normalized_jacobian_det(pose, geom) < geom.singularity_tol;
}

PoseVector forward_kinematics(const LegLengths& legs, const PlatformGeometry& geom,
                              const PoseVector& guess, const FkOptions& opts) {
    for (double len : legs.lengths) {
        if (!std::isfinite(len) || len <= 0.0) {
            throw InvalidInputError("forward_kinematics: non-positive leg length");
        }
    }
    const Eigen::Map<const Vector6> target(legs.lengths.data());

    Vector6 pose = guess.as_vector();
    auto residual = [&](const Vector6& p) -> Vector6 {
        const LegLengths l = inverse_kinematics(PoseVector::from_vector(p), geom);
        return Eigen::Map<const Vector6>(l.lengths.data()) - target;
    };

    Vector6 f = residual(pose);
    double fnorm = f.cwiseAbs().maxCoeff();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (fnorm < opts.tolerance_mm) {
            return PoseVector::from_vector(pose).normalized();
        }
        const JacobianMatrix j = jacobian(PoseVector::from_vector(pose), geom);
        Eigen::FullPivLU<JacobianMatrix> lu(j);
        if (!lu.isInvertible()) {
            throw SingularJacobianError("forward_kinematics: rank-deficient Jacobian at iterate");
        }
        const Vector6 step = lu.solve(-f);
        // Halve the step until the residual decreases.
        double scale = 1.0;
        Vector6 next = pose + step;
        Vector6 fn = residual(next);
        double fn_norm = fn.cwiseAbs().maxCoeff();
        for (int h = 0; h < opts.max_halvings && !(fn_norm < fnorm); ++h) {
            scale *= 0.5;
            next = pose + scale * step;
            fn = residual(next);
            fn_norm = fn.cwiseAbs().maxCoeff();
        }
        pose = next;
        f = fn;
        fnorm = fn_norm;
    }
    if (fnorm < opts.tolerance_mm) {
        return PoseVector::from_vector(pose).normalized();
    }
    throw NoConvergenceError(
        "forward_kinematics: no convergence after " + std::to_string(opts.max_iterations) +
            " iterations, residual " + std::to_string(fnorm) + " mm",
        fnorm);
}

}  // namespace hexcal
