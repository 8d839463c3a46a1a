#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hexcal/dh.hpp"
#include "hexcal/geometry.hpp"
#include "hexcal/kinematics.hpp"
#include "hexcal/pose.hpp"

namespace hexcal {

struct PoseObservation {
    int pose_id = 0;
    PoseVector target;
    PoseVector measured;
};

enum class ExclusionReason { outlier, out_of_range, no_convergence };

const char* exclusion_reason_name(ExclusionReason r);

struct CalibrationDataset {
    std::vector<PoseObservation> observations;      // pose_ids unique
    std::map<int, ExclusionReason> excluded;        // never participate in fits or metrics

    /// Observations not marked excluded, in stored order.
    std::vector<PoseObservation> active() const;
};

/// measured - target, component-wise; angle components differenced on the
/// normalized (-180, 180] branch.
Vector6 error_vector(const PoseObservation& obs);

// Ordinary least-squares line fitted to error-vs-value samples. Applied as the
// exact inverse of the fitted error map: corrected = (target - intercept) /
// (1 + slope), i.e. the value that lands on the target after the fitted error
// acts on it. Degenerate fits (identical xs) fall back to intercept-only.
struct AffineCorrection {
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;

    double predicted_error(double x) const { return slope * x + intercept; }
    double apply(double target) const;
};

/// OLS fit of y against x. Throws InsufficientDataError for fewer than two
/// points; identical xs yield the flagged intercept-only fallback.
AffineCorrection fit_affine(std::span<const double> xs, std::span<const double> ys);

// Which correction sets are populated follows the option:
//   1: dh only; 2: dh + pose orientation entries; 3: pose entries only.
struct CompensationModel {
    int option = 0;
    // [leg][row][param], param order: theta, d, a, alpha_link.
    std::array<std::array<std::array<AffineCorrection, 4>, 6>, 6> dh{};
    std::array<AffineCorrection, 6> pose{};  // pose-parameter corrections
};

extern const std::array<const char*, 4> kDhParamNames;

/// Fits the chosen option's corrections on the non-excluded observations.
/// Throws InsufficientDataError (< 2 usable) and propagates SingularPoseError
/// with the offending pose_id (options 1-2).
CompensationModel fit_compensation(const CalibrationDataset& ds, const PlatformGeometry& geom,
                                   int option, int threads = 1);

/// Applies a fitted model to target poses, yielding predicted command poses.
std::vector<std::pair<int, PoseVector>> apply_compensation(
    const CompensationModel& model, const std::vector<std::pair<int, PoseVector>>& targets,
    const PlatformGeometry& geom, int threads = 1);

// One-call forms of the three strategies, fitted and applied on the same
// dataset. Option 1 corrects positions through DH space and passes target
// orientations through unchanged; option 2 adds pose-space orientation
// corrections; option 3 corrects all six parameters in pose space.
std::vector<std::pair<int, PoseVector>> compensate_option1(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom,
                                                           int threads = 1);
std::vector<std::pair<int, PoseVector>> compensate_option2(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom,
                                                           int threads = 1);
std::vector<std::pair<int, PoseVector>> compensate_option3(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom);

struct DroppedPose {
    int pose_id = 0;
    PoseVector pose;
    std::string reason;  // e.g. "z above bound", "leg 4 over-extended"
};

struct FilterResult {
    std::vector<std::pair<int, PoseVector>> kept;
    std::vector<DroppedPose> dropped;
};

/// Keeps poses inside pose_bounds whose IK leg lengths stay within limits;
/// drops the rest, naming the first violated bound.
FilterResult filter_workspace(const std::vector<std::pair<int, PoseVector>>& predicted,
                              const PlatformGeometry& geom);

/// Flags observations whose target sits within the near-singular margin
/// (normalized |det J| below 10x singularity_tol). Exclusion is the caller's call.
std::vector<std::pair<int, double>> detect_outliers(const CalibrationDataset& ds,
                                                    const PlatformGeometry& geom);

}  // namespace hexcal
