#pragma once

#include <array>

#include "hexcal/geometry.hpp"
#include "hexcal/pose.hpp"

namespace hexcal {

struct LegLengths {
    std::array<double, 6> lengths{};  // mm
    bool valid = false;               // true iff every length in [leg_min, leg_max]
};

// Rows = legs, columns = pose parameters (x, y, z, alpha, beta, gamma).
// Translation columns are dimensionless direction cosines (mm/mm);
// rotation columns are mm/deg to match the pose parameterization.
using JacobianMatrix = Eigen::Matrix<double, 6, 6>;

/// Closed-form leg lengths for a pose: length_i = |T_P * p_i - b_i|.
/// Out-of-range lengths are returned with valid = false, never an error.
LegLengths inverse_kinematics(const PoseVector& pose, const PlatformGeometry& geom);

struct FkOptions {
    int max_iterations = 100;
    double tolerance_mm = 1e-9;  // convergence on the residual infinity-norm
    int max_halvings = 20;       // step damping budget per iteration
};

// Damped Newton-Raphson on f(pose) = IK(pose) - target_legs, seeded from the
// guess so the solution stays on the guess's branch. Deterministic: identical
// inputs give bit-identical results.
// Throws NoConvergenceError (budget exhausted) or SingularJacobianError.
PoseVector forward_kinematics(const LegLengths& legs, const PlatformGeometry& geom,
                              const PoseVector& guess, const FkOptions& opts = {});

/// Analytic force Jacobian: row i is the gradient of leg length i w.r.t. the pose.
JacobianMatrix jacobian(const PoseVector& pose, const PlatformGeometry& geom);

/// |det J| divided by the product of row norms (Hadamard bound), a
/// unit-independent conditioning measure in [0, 1].
double normalized_jacobian_det(const PoseVector& pose, const PlatformGeometry& geom);

/// True iff the normalized determinant falls below geom.singularity_tol.
bool is_singular(const PoseVector& pose, const PlatformGeometry& geom);

}  // namespace hexcal
