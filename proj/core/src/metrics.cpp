#include "hexcal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hexcal/errors.hpp"

namespace hexcal {

double error_range(std::span<const double> errors) {
    if (errors.empty()) throw EmptyInputError("error_range: empty input");
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    return *hi - *lo;
}

double rmse_magnitude(double r1, double r2, double r3) {
    return std::sqrt((r1 * r1 + r2 * r2 + r3 * r3) / 3.0);
}

double improvement_pct(double before, double after) {
    if (!(before > 0.0)) throw ZeroBaselineError("improvement_pct: baseline must be > 0");
    return 100.0 * (before - after) / before;
}

ErrorReport report_from_errors(std::span<const Vector6> errors,
                               const std::optional<ErrorReport>& baseline) {
    if (errors.empty()) throw EmptyDatasetError("report: no error vectors");
    ErrorReport report;
    report.pose_count = static_cast<int>(errors.size());
    std::vector<double> column(errors.size());
    for (int k = 0; k < 6; ++k) {
        for (std::size_t i = 0; i < errors.size(); ++i) column[i] = errors[i][k];
        report.ranges[k] = error_range(column);
    }
    report.position_magnitude = rmse_magnitude(report.ranges[0], report.ranges[1], report.ranges[2]);
    report.orientation_magnitude =
        rmse_magnitude(report.ranges[3], report.ranges[4], report.ranges[5]);
    if (baseline) {
        // An exactly-zero baseline with an exactly-zero result means the
        // machine was already exact: report 0% rather than fail.
        auto improvement = [](double before, double after) -> std::optional<double> {
            if (before > 0.0) return improvement_pct(before, after);
            if (after == 0.0) return 0.0;
            return std::nullopt;
        };
        report.improvement_position_pct =
            improvement(baseline->position_magnitude, report.position_magnitude);
        report.improvement_orientation_pct =
            improvement(baseline->orientation_magnitude, report.orientation_magnitude);
    }
    return report;
}

ErrorReport build_report(const CalibrationDataset& ds,
                         const std::optional<ErrorReport>& baseline) {
    std::vector<Vector6> errors;
    for (const auto& obs : ds.active()) errors.push_back(error_vector(obs));
    if (errors.empty()) throw EmptyDatasetError("build_report: no usable observations");
    return report_from_errors(errors, baseline);
}

namespace {

constexpr int kLabelWidth = 30;
constexpr int kCellWidth = 14;

std::string cell(double v, const char* fmt) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), fmt, v);
    std::string s(buf);
    if (s.size() < kCellWidth) s.insert(0, kCellWidth - s.size(), ' ');
    return s;
}

std::string pad_label(std::string label) {
    if (label.size() < kLabelWidth) label.append(kLabelWidth - label.size(), ' ');
    return label;
}

std::string range_row(const std::string& label, const std::array<double, 6>& r,
                      const char* fmt) {
    std::string line = pad_label(label);
    for (double v : r) line += cell(v, fmt);
    return line + '\n';
}

// Magnitude rows span the three position and three orientation columns.
std::string magnitude_row(const std::string& label, double pos, double rot, const char* fmt) {
    return pad_label(label) + cell(pos, fmt) + std::string(2 * kCellWidth, ' ') +
           cell(rot, fmt) + "\n";
}

std::string render_block(const ErrorReport& report, const std::optional<ErrorReport>& baseline,
                         const char* fmt) {
    std::string out = pad_label("parameters");
    for (const char* name : {"x_tran", "y_tran", "z_tran", "x_rot", "y_rot", "z_rot"}) {
        std::string h(name);
        h.insert(0, kCellWidth - h.size(), ' ');
        out += h;
    }
    out += '\n';
    if (baseline) {
        out += range_row("error range - uncompensated", baseline->ranges, fmt);
        out += magnitude_row("magnitude - uncompensated", baseline->position_magnitude,
                             baseline->orientation_magnitude, fmt);
        out += range_row("error range - compensated", report.ranges, fmt);
        out += magnitude_row("magnitude - compensated", report.position_magnitude,
                             report.orientation_magnitude, fmt);
        if (report.improvement_position_pct && report.improvement_orientation_pct) {
            out += magnitude_row("improvement %", *report.improvement_position_pct,
                                 *report.improvement_orientation_pct, fmt);
        } else {
            out += pad_label("improvement %") + "   (undefined: zero baseline)\n";
        }
    } else {
        out += range_row("error range", report.ranges, fmt);
        out += magnitude_row("magnitude", report.position_magnitude,
                             report.orientation_magnitude, fmt);
    }
    out += "poses: " + std::to_string(report.pose_count) + "\n";
    return out;
}

}  // namespace

std::string render_report_text(const ErrorReport& report,
                               const std::optional<ErrorReport>& baseline) {
    std::string out;
    out += "== paper-style (2 decimals) ==\n";
    out += render_block(report, baseline, "%.2f");
    out += "\n== full precision ==\n";
    out += render_block(report, baseline, "%.9g");
    return out;
}

}  // namespace hexcal
