#pragma once

#include <cstdint>
#include <vector>

#include "hexcal/calibration.hpp"
#include "hexcal/geometry.hpp"
#include "hexcal/kinematics.hpp"
#include "hexcal/pose.hpp"
#include "hexcal/rng.hpp"

namespace hexcal {

// Deterministic stand-in for the measurement rig: an as-built "true" machine
// differs from the nominal geometry by displaced joints and constant actuator
// offsets, and each measured pose carries pixel-scale Gaussian noise.

struct PerturbationSpec {
    double joint_position_noise = 0.0;       // per-coordinate uniform bound (mm)
    std::array<double, 6> leg_offset_bias{};  // constant actuator-length offsets (mm)
    std::uint64_t seed = 0;
};

struct NoiseSpec {
    double position_sigma = 0.0;     // mm; default picked so 3 sigma ~ 0.425 mm
    double orientation_sigma = 0.0;  // deg
    std::uint64_t seed = 0;
};

/// The as-built machine: displaced joint geometry plus the attached leg biases.
struct TrueMachine {
    PlatformGeometry geometry;
    std::array<double, 6> leg_bias{};
};

// n poses uniform over pose_bounds, rejection-sampled to be clear of the
// near-singular margin (10x singularity_tol) and IK-valid. One sequential
// stream per seed; bit-identical output per seed. Throws
// ExhaustedSamplingError after 1000*n candidate draws.
std::vector<PoseVector> generate_random_poses(int n, const PlatformGeometry& geom,
                                              std::uint64_t seed);

/// Displaces every base/platform joint coordinate by Uniform(-b, +b) and
/// attaches the leg biases. Throws InvalidatedGeometryError when the result
/// violates geometry invariants.
TrueMachine perturb_geometry(const PlatformGeometry& geom, const PerturbationSpec& spec);

// One measurement: command legs = IK(target, nominal) + leg_bias, let the true
// machine reach them (FK seeded from the target, falling back to the home
// guess), then add pose-space noise from the pose_index substream of
// noise.seed. Deterministic per (seed, pose_index). Propagates
// NoConvergenceError when the true machine cannot realize the command.
PoseVector simulate_measurement(const PoseVector& target, const PlatformGeometry& nominal,
                                const TrueMachine& truth, const NoiseSpec& noise,
                                int pose_index = 0);

/// One observation per target, pose_ids sequential from 1; FK failures are
/// recorded as exclusions rather than errors.
CalibrationDataset build_dataset(const std::vector<PoseVector>& targets,
                                 const PlatformGeometry& nominal, const TrueMachine& truth,
                                 const NoiseSpec& noise, int threads = 1);

}  // namespace hexcal
