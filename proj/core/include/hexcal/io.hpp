#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hexcal/calibration.hpp"
#include "hexcal/config.hpp"
#include "hexcal/geometry.hpp"
#include "hexcal/metrics.hpp"
#include "hexcal/simulator.hpp"

namespace hexcal {

/// "%.9g" — the canonical float form for all CSV output.
std::string fmt9(double v);

// ---- geometry configuration -------------------------------------------------

PlatformGeometry geometry_from_config(const ConfigFile& cfg);
PlatformGeometry load_geometry(const std::string& path);
void save_geometry(const std::string& path, const PlatformGeometry& geom);

// ---- scenario ----------------------------------------------------------------

// A full simulation recipe. [perturbation] and [noise] sections share the
// geometry file's format; their seeds default to substreams 1 and 2 of the
// top-level seed so overriding `seed` reseeds everything at once.
struct Scenario {
    PlatformGeometry geometry;
    PerturbationSpec perturbation;
    NoiseSpec noise;
    int pose_count = 0;
    std::uint64_t seed = 0;
};

/// Reads a scenario; the geometry comes from `geometry_override` when given,
/// else from the scenario's `geometry = "<path>"` key (relative to the
/// scenario file). `seed_override` replaces the top-level seed before the
/// section-seed defaults are derived.
Scenario load_scenario(const std::string& path,
                       const std::optional<std::string>& geometry_override = {},
                       const std::optional<std::uint64_t>& seed_override = {});

// ---- dataset CSV ---------------------------------------------------------
// Header: pose_id,tx,ty,tz,ta,tb,tg,mx,my,mz,ma,mb,mg,excluded,reason

void write_dataset_csv(const std::string& path, const CalibrationDataset& ds);
CalibrationDataset read_dataset_csv(const std::string& path);

/// Dataset CSV header line (used to sniff cmd_report input kind).
extern const char* kDatasetCsvHeader;

/// Checks the PoseObservation invariant that targets lie within pose_bounds.
void validate_dataset(const CalibrationDataset& ds, const PlatformGeometry& geom);

// ---- predictions CSV -------------------------------------------------------
// Header: pose_id,tx,ty,tz,ta,tb,tg,px,py,pz,pa,pb,pg (targets ride along so
// verification can compare against the original commands).

struct PredictedPose {
    int pose_id = 0;
    PoseVector target;
    PoseVector predicted;
};

void write_predictions_csv(const std::string& path, const std::vector<PredictedPose>& rows);
std::vector<PredictedPose> read_predictions_csv(const std::string& path);

// ---- per-pose error CSV (plot shape) ----------------------------------------
// Header: pose_id,x_tran,y_tran,z_tran,x_rot,y_rot,z_rot

void write_error_csv(const std::string& path,
                     const std::vector<std::pair<int, Vector6>>& rows);
std::vector<std::pair<int, Vector6>> read_error_csv(const std::string& path);

extern const char* kErrorCsvHeader;

// ---- report CSV --------------------------------------------------------------
// Rows mirror the comparison tables: metric,x_tran,...,z_rot. Standalone
// reports carry error_range/magnitude/pose_count rows; baselined reports add
// the uncompensated block and improvement_pct.

void write_report_csv(const std::string& path, const ErrorReport& report,
                      const std::optional<ErrorReport>& baseline = {});

/// Reads back a report CSV (the compensated block when both are present).
ErrorReport read_report_csv(const std::string& path);

// ---- compensation model file ----------------------------------------------
// Textual, full-precision, refit-free re-application:
//   hexcal-model 1
//   option <1|2|3>
//   dh <leg> <row> <param> <slope> <intercept> <degenerate>
//   pose <param> <slope> <intercept> <degenerate>

void save_model(const std::string& path, const CompensationModel& model);
CompensationModel load_model(const std::string& path);

// ---- DH audit side-table -----------------------------------------------------
// Columns: pose_id,leg,row_index,theta_deg,d_mm,a_mm,alpha_deg

void write_dh_audit(const std::string& path,
                    const std::vector<std::pair<int, DHChain>>& chains);

}  // namespace hexcal
