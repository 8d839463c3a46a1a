#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexcal/calibration.hpp"
#include "hexcal/pose.hpp"

namespace hexcal {

// Error spread summary in the shape of the published comparison tables:
// per-parameter ranges, the two RMSE magnitudes, and improvement percentages
// when a baseline report was supplied.
struct ErrorReport {
    std::array<double, 6> ranges{};  // x/y/z-tran (mm), x/y/z-rot (deg)
    double position_magnitude = 0.0;
    double orientation_magnitude = 0.0;
    std::optional<double> improvement_position_pct;
    std::optional<double> improvement_orientation_pct;
    int pose_count = 0;
};

/// max - min over the values. Throws EmptyInputError.
double error_range(std::span<const double> errors);

/// sqrt((r1^2 + r2^2 + r3^2) / 3).
double rmse_magnitude(double r1, double r2, double r3);

/// 100 * (before - after) / before. Throws ZeroBaselineError when before <= 0.
double improvement_pct(double before, double after);

/// Report over raw error vectors (one per pose, measured minus target).
ErrorReport report_from_errors(std::span<const Vector6> errors,
                               const std::optional<ErrorReport>& baseline = {});

/// Report over the non-excluded observations. Throws EmptyDatasetError.
ErrorReport build_report(const CalibrationDataset& ds,
                         const std::optional<ErrorReport>& baseline = {});

// Renders the table layout used throughout: one row block per metric, columns
// x_tran..z_rot, in both paper-style 2-decimal and full-precision forms. When
// a baseline is present its rows appear as the uncompensated block.
std::string render_report_text(const ErrorReport& report,
                               const std::optional<ErrorReport>& baseline = {});

}  // namespace hexcal
