#include "hexcal/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexcal/errors.hpp"

namespace hexcal {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

std::string fmt(const char* spec, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt17(double v) { return fmt("%.17g", v); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("cannot write file: " + path);
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& s, const std::string& path, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) fail(path, line, "bad number '" + s + "'");
    return v;
}

long parse_int(const std::string& s, const std::string& path, int line) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) fail(path, line, "bad integer '" + s + "'");
    return v;
}

const ConfigValue& require(const ConfigFile& cfg, const ConfigSection& section,
                           const std::string& key) {
    const auto it = section.values.find(key);
    if (it == section.values.end()) {
        fail(cfg.name, section.line, "missing required field '" + key + "'");
    }
    return it->second;
}

void reject_unknown(const ConfigFile& cfg, const ConfigSection& section,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : section.values) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) { ok = true; break; }
        }
        if (!ok) fail(cfg.name, value.line, "unknown field '" + key + "'");
    }
}

Eigen::Vector3d to_vec3(const ConfigValue& v, const std::string& where) {
    const auto nums = v.as_number_array(where, 3);
    return {nums[0], nums[1], nums[2]};
}

}  // namespace

std::string fmt9(double v) { return fmt("%.9g", v); }

// ---- geometry ------------------------------------------------------------

PlatformGeometry geometry_from_config(const ConfigFile& cfg) {
    const std::string& where = cfg.name;
    reject_unknown(cfg, cfg.root,
                   {"base_joints", "platform_joints", "leg_min_mm", "leg_max_mm", "fd_mm",
                    "gd_home_mm", "ug_offset_mm", "pose_bounds", "singularity_tol"});

    PlatformGeometry g;
    for (const char* key : {"base_joints", "platform_joints"}) {
        const ConfigValue& value = require(cfg, cfg.root, key);
        const auto& rows = value.as_array(where);
        if (rows.size() != 6) {
            fail(where, value.line, std::string(key) + " must list exactly 6 joints");
        }
        for (int i = 0; i < 6; ++i) {
            auto& dst = (std::string(key) == "base_joints") ? g.base_joints : g.platform_joints;
            dst[i] = to_vec3(rows[i], where);
        }
    }
    g.leg_min = require(cfg, cfg.root, "leg_min_mm").as_number(where);
    g.leg_max = require(cfg, cfg.root, "leg_max_mm").as_number(where);
    g.fd = require(cfg, cfg.root, "fd_mm").as_number(where);
    g.gd_home = require(cfg, cfg.root, "gd_home_mm").as_number(where);
    g.ug_offset = to_vec3(require(cfg, cfg.root, "ug_offset_mm"), where);
    g.singularity_tol = require(cfg, cfg.root, "singularity_tol").as_number(where);

    const ConfigValue& bounds = require(cfg, cfg.root, "pose_bounds");
    const auto& rows = bounds.as_array(where);
    if (rows.size() != 6) {
        fail(where, bounds.line, "pose_bounds must list [min, max] for all 6 parameters");
    }
    for (int k = 0; k < 6; ++k) {
        const auto mm = rows[k].as_number_array(where, 2);
        g.pose_bounds.min[k] = mm[0];
        g.pose_bounds.max[k] = mm[1];
    }

    try {
        g.validate();
    } catch (const InvalidatedGeometryError& e) {
        fail(where, cfg.root.line, e.what());
    }
    return g;
}

PlatformGeometry load_geometry(const std::string& path) {
    return geometry_from_config(parse_config_file(path));
}

void save_geometry(const std::string& path, const PlatformGeometry& geom) {
    auto out = open_out(path);
    auto joints = [&](const std::array<Eigen::Vector3d, 6>& js) {
        std::string s = "[\n";
        for (const auto& j : js) {
            s += "  [" + fmt17(j.x()) + ", " + fmt17(j.y()) + ", " + fmt17(j.z()) + "],\n";
        }
        s += "]";
        return s;
    };
    out << "base_joints = " << joints(geom.base_joints) << "\n";
    out << "platform_joints = " << joints(geom.platform_joints) << "\n";
    out << "leg_min_mm = " << fmt17(geom.leg_min) << "\n";
    out << "leg_max_mm = " << fmt17(geom.leg_max) << "\n";
    out << "fd_mm = " << fmt17(geom.fd) << "\n";
    out << "gd_home_mm = " << fmt17(geom.gd_home) << "\n";
    out << "ug_offset_mm = [" << fmt17(geom.ug_offset.x()) << ", " << fmt17(geom.ug_offset.y())
        << ", " << fmt17(geom.ug_offset.z()) << "]\n";
    out << "pose_bounds = [\n";
    for (int k = 0; k < 6; ++k) {
        out << "  [" << fmt17(geom.pose_bounds.min[k]) << ", " << fmt17(geom.pose_bounds.max[k])
            << "],  # " << kPoseParamNames[k] << "\n";
    }
    out << "]\n";
    out << "singularity_tol = " << fmt17(geom.singularity_tol) << "\n";
}

// ---- scenario --------------------------------------------------------------

Scenario load_scenario(const std::string& path,
                       const std::optional<std::string>& geometry_override,
                       const std::optional<std::uint64_t>& seed_override) {
    const ConfigFile cfg = parse_config_file(path);
    reject_unknown(cfg, cfg.root, {"pose_count", "seed", "geometry"});
    for (const auto& [name, section] : cfg.sections) {
        if (name != "perturbation" && name != "noise") {
            fail(cfg.name, section.line, "unknown section '" + name + "'");
        }
    }

    Scenario sc;
    const ConfigValue& count = require(cfg, cfg.root, "pose_count");
    sc.pose_count = static_cast<int>(count.as_number(cfg.name));
    if (sc.pose_count < 1 || sc.pose_count != count.as_number(cfg.name)) {
        fail(cfg.name, count.line, "pose_count must be a positive integer");
    }
    sc.seed = static_cast<std::uint64_t>(require(cfg, cfg.root, "seed").as_number(cfg.name));
    if (seed_override) sc.seed = *seed_override;

    if (geometry_override) {
        sc.geometry = load_geometry(*geometry_override);
    } else {
        const auto it = cfg.root.values.find("geometry");
        if (it == cfg.root.values.end()) {
            fail(cfg.name, cfg.root.line,
                 "missing 'geometry' (give a geometry file here or via --geometry)");
        }
        const std::filesystem::path geo(it->second.as_string(cfg.name));
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        sc.geometry = load_geometry(geo.is_absolute() ? geo.string() : (base / geo).string());
    }

    sc.perturbation.seed = SplitMix64::substream(sc.seed, 1);
    sc.noise.seed = SplitMix64::substream(sc.seed, 2);

    if (const auto it = cfg.sections.find("perturbation"); it != cfg.sections.end()) {
        const ConfigSection& s = it->second;
        reject_unknown(cfg, s, {"joint_position_noise_mm", "leg_offset_bias_mm", "seed"});
        if (const auto v = s.values.find("joint_position_noise_mm"); v != s.values.end()) {
            sc.perturbation.joint_position_noise = v->second.as_number(cfg.name);
        }
        if (const auto v = s.values.find("leg_offset_bias_mm"); v != s.values.end()) {
            const auto nums = v->second.as_number_array(cfg.name, 6);
            std::copy(nums.begin(), nums.end(), sc.perturbation.leg_offset_bias.begin());
        }
        if (const auto v = s.values.find("seed"); v != s.values.end()) {
            sc.perturbation.seed = static_cast<std::uint64_t>(v->second.as_number(cfg.name));
        }
    }
    if (const auto it = cfg.sections.find("noise"); it != cfg.sections.end()) {
        const ConfigSection& s = it->second;
        reject_unknown(cfg, s, {"position_sigma_mm", "orientation_sigma_deg", "seed"});
        if (const auto v = s.values.find("position_sigma_mm"); v != s.values.end()) {
            sc.noise.position_sigma = v->second.as_number(cfg.name);
        }
        if (const auto v = s.values.find("orientation_sigma_deg"); v != s.values.end()) {
            sc.noise.orientation_sigma = v->second.as_number(cfg.name);
        }
        if (const auto v = s.values.find("seed"); v != s.values.end()) {
            sc.noise.seed = static_cast<std::uint64_t>(v->second.as_number(cfg.name));
        }
    }
    if (sc.noise.position_sigma < 0 || sc.noise.orientation_sigma < 0) {
        fail(cfg.name, cfg.root.line, "noise sigmas must be >= 0");
    }
    return sc;
}

// ---- dataset CSV -----------------------------------------------------------

const char* kDatasetCsvHeader = "pose_id,tx,ty,tz,ta,tb,tg,mx,my,mz,ma,mb,mg,excluded,reason";

namespace {

std::string pose_fields(const PoseVector& p) {
    return fmt9(p.x) + "," + fmt9(p.y) + "," + fmt9(p.z) + "," + fmt9(p.alpha) + "," +
           fmt9(p.beta) + "," + fmt9(p.gamma);
}

PoseVector pose_from_fields(const std::vector<std::string>& f, std::size_t at,
                            const std::string& path, int line) {
    PoseVector p;
    p.x = parse_double(f[at + 0], path, line);
    p.y = parse_double(f[at + 1], path, line);
    p.z = parse_double(f[at + 2], path, line);
    p.alpha = parse_double(f[at + 3], path, line);
    p.beta = parse_double(f[at + 4], path, line);
    p.gamma = parse_double(f[at + 5], path, line);
    return p;
}

}  // namespace

void write_dataset_csv(const std::string& path, const CalibrationDataset& ds) {
    auto out = open_out(path);
    out << kDatasetCsvHeader << "\n";
    for (const auto& obs : ds.observations) {
        const auto it = ds.excluded.find(obs.pose_id);
        out << obs.pose_id << "," << pose_fields(obs.target) << "," << pose_fields(obs.measured)
            << "," << (it != ds.excluded.end() ? 1 : 0) << ","
            << (it != ds.excluded.end() ? exclusion_reason_name(it->second) : "") << "\n";
    }
}

CalibrationDataset read_dataset_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kDatasetCsvHeader) {
        fail(path, 1, "expected dataset header '" + std::string(kDatasetCsvHeader) + "'");
    }
    CalibrationDataset ds;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        const int line = static_cast<int>(i) + 1;
        if (f.size() != 15) fail(path, line, "expected 15 fields");
        PoseObservation obs;
        obs.pose_id = static_cast<int>(parse_int(f[0], path, line));
        obs.target = pose_from_fields(f, 1, path, line);
        obs.measured = pose_from_fields(f, 7, path, line);
        if (!obs.target.is_finite() || !obs.measured.is_finite()) {
            fail(path, line, "non-finite pose");
        }
        for (const auto& existing : ds.observations) {
            if (existing.pose_id == obs.pose_id) fail(path, line, "duplicate pose_id");
        }
        const long excluded = parse_int(f[13], path, line);
        if (excluded != 0) {
            ExclusionReason reason;
            if (f[14] == "outlier") reason = ExclusionReason::outlier;
            else if (f[14] == "out_of_range") reason = ExclusionReason::out_of_range;
            else if (f[14] == "no_convergence") reason = ExclusionReason::no_convergence;
            else fail(path, line, "unknown exclusion reason '" + f[14] + "'");
            ds.excluded.emplace(obs.pose_id, reason);
        }
        ds.observations.push_back(obs);
    }
    return ds;
}

void validate_dataset(const CalibrationDataset& ds, const PlatformGeometry& geom) {
    for (const auto& obs : ds.observations) {
        if (!geom.pose_bounds.contains(obs.target)) {
            throw InvalidInputError("dataset: target of pose " + std::to_string(obs.pose_id) +
                                    " lies outside pose_bounds");
        }
    }
}

// ---- predictions CSV -------------------------------------------------------

namespace {
const char* kPredictionsCsvHeader = "pose_id,tx,ty,tz,ta,tb,tg,px,py,pz,pa,pb,pg";
}

void write_predictions_csv(const std::string& path, const std::vector<PredictedPose>& rows) {
    auto out = open_out(path);
    out << kPredictionsCsvHeader << "\n";
    for (const auto& row : rows) {
        out << row.pose_id << "," << pose_fields(row.target) << "," << pose_fields(row.predicted)
            << "\n";
    }
}

std::vector<PredictedPose> read_predictions_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kPredictionsCsvHeader) {
        fail(path, 1, "expected predictions header '" + std::string(kPredictionsCsvHeader) + "'");
    }
    std::vector<PredictedPose> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        const int line = static_cast<int>(i) + 1;
        if (f.size() != 13) fail(path, line, "expected 13 fields");
        PredictedPose row;
        row.pose_id = static_cast<int>(parse_int(f[0], path, line));
        row.target = pose_from_fields(f, 1, path, line);
        row.predicted = pose_from_fields(f, 7, path, line);
        rows.push_back(row);
    }
    return rows;
}

// ---- per-pose error CSV ------------------------------------------------------

const char* kErrorCsvHeader = "pose_id,x_tran,y_tran,z_tran,x_rot,y_rot,z_rot";

void write_error_csv(const std::string& path,
                     const std::vector<std::pair<int, Vector6>>& rows) {
    auto out = open_out(path);
    out << kErrorCsvHeader << "\n";
    for (const auto& [id, e] : rows) {
        out << id;
        for (int k = 0; k < 6; ++k) out << "," << fmt9(e[k]);
        out << "\n";
    }
}

std::vector<std::pair<int, Vector6>> read_error_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kErrorCsvHeader) {
        fail(path, 1, "expected error header '" + std::string(kErrorCsvHeader) + "'");
    }
    std::vector<std::pair<int, Vector6>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        const int line = static_cast<int>(i) + 1;
        if (f.size() != 7) fail(path, line, "expected 7 fields");
        Vector6 e;
        for (int k = 0; k < 6; ++k) e[k] = parse_double(f[k + 1], path, line);
        rows.emplace_back(static_cast<int>(parse_int(f[0], path, line)), e);
    }
    return rows;
}

// ---- report CSV ----------------------------------------------------------

namespace {
const char* kReportCsvHeader = "metric,x_tran,y_tran,z_tran,x_rot,y_rot,z_rot";

std::string range_csv_row(const char* metric, const std::array<double, 6>& r) {
    std::string line = metric;
    for (double v : r) line += "," + fmt9(v);
    return line + "\n";
}

std::string magnitude_csv_row(const char* metric, double pos, double rot) {
    return std::string(metric) + "," + fmt9(pos) + ",,," + fmt9(rot) + ",,\n";
}
}  // namespace

void write_report_csv(const std::string& path, const ErrorReport& report,
                      const std::optional<ErrorReport>& baseline) {
    auto out = open_out(path);
    out << kReportCsvHeader << "\n";
    if (baseline) {
        out << range_csv_row("error_range_uncompensated", baseline->ranges);
        out << magnitude_csv_row("magnitude_uncompensated", baseline->position_magnitude,
                                 baseline->orientation_magnitude);
        out << range_csv_row("error_range_compensated", report.ranges);
        out << magnitude_csv_row("magnitude_compensated", report.position_magnitude,
                                 report.orientation_magnitude);
        if (report.improvement_position_pct && report.improvement_orientation_pct) {
            out << magnitude_csv_row("improvement_pct", *report.improvement_position_pct,
                                     *report.improvement_orientation_pct);
        }
    } else {
        out << range_csv_row("error_range", report.ranges);
        out << magnitude_csv_row("magnitude", report.position_magnitude,
                                 report.orientation_magnitude);
    }
    out << "pose_count," << report.pose_count << ",,,,,\n";
}

ErrorReport read_report_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != kReportCsvHeader) {
        fail(path, 1, "expected report header '" + std::string(kReportCsvHeader) + "'");
    }
    ErrorReport report;
    bool have_range = false, have_magnitude = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv(lines[i]);
        const int line = static_cast<int>(i) + 1;
        if (f.size() != 7) fail(path, line, "expected 7 fields");
        const std::string& metric = f[0];
        if (metric == "error_range" || metric == "error_range_compensated") {
            for (int k = 0; k < 6; ++k) report.ranges[k] = parse_double(f[k + 1], path, line);
            have_range = true;
        } else if (metric == "magnitude" || metric == "magnitude_compensated") {
            report.position_magnitude = parse_double(f[1], path, line);
            report.orientation_magnitude = parse_double(f[4], path, line);
            have_magnitude = true;
        } else if (metric == "improvement_pct") {
            report.improvement_position_pct = parse_double(f[1], path, line);
            report.improvement_orientation_pct = parse_double(f[4], path, line);
        } else if (metric == "pose_count") {
            report.pose_count = static_cast<int>(parse_int(f[1], path, line));
        } else if (metric != "error_range_uncompensated" && metric != "magnitude_uncompensated") {
            fail(path, line, "unknown metric '" + metric + "'");
        }
    }
    if (!have_range || !have_magnitude) fail(path, 1, "report is missing range/magnitude rows");
    return report;
}

// ---- model file ------------------------------------------------------------

namespace {

std::string correction_fields(const AffineCorrection& c) {
    return fmt17(c.slope) + " " + fmt17(c.intercept) + " " + (c.degenerate ? "1" : "0");
}

int dh_param_index(const std::string& name, const std::string& path, int line) {
    for (int p = 0; p < 4; ++p) {
        if (name == kDhParamNames[p]) return p;
    }
    fail(path, line, "unknown DH parameter '" + name + "'");
}

int pose_param_index(const std::string& name, const std::string& path, int line) {
    for (int p = 0; p < 6; ++p) {
        if (name == kPoseParamNames[p]) return p;
    }
    fail(path, line, "unknown pose parameter '" + name + "'");
}

}  // namespace

void save_model(const std::string& path, const CompensationModel& model) {
    auto out = open_out(path);
    out << "hexcal-model 1\n";
    out << "option " << model.option << "\n";
    if (model.option == 1 || model.option == 2) {
        for (int leg = 0; leg < 6; ++leg) {
            for (int row = 0; row < 6; ++row) {
                for (int param = 0; param < 4; ++param) {
                    out << "dh " << leg << " " << row << " " << kDhParamNames[param] << " "
                        << correction_fields(model.dh[leg][row][param]) << "\n";
                }
            }
        }
    }
    const int pose_begin = model.option == 2 ? 3 : 0;
    if (model.option >= 2) {
        for (int k = pose_begin; k < 6; ++k) {
            out << "pose " << kPoseParamNames[k] << " " << correction_fields(model.pose[k])
                << "\n";
        }
    }
}

CompensationModel load_model(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "hexcal-model 1") {
        fail(path, 1, "expected 'hexcal-model 1' header");
    }
    CompensationModel model;
    bool have_option = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const int line = static_cast<int>(i) + 1;
        std::istringstream in(lines[i]);
        std::string tag;
        in >> tag;
        if (tag == "option") {
            in >> model.option;
            if (in.fail() || model.option < 1 || model.option > 3) {
                fail(path, line, "option must be 1, 2 or 3");
            }
            have_option = true;
        } else if (tag == "dh") {
            int leg, row;
            std::string param;
            AffineCorrection c;
            int degenerate;
            in >> leg >> row >> param >> c.slope >> c.intercept >> degenerate;
            if (in.fail() || leg < 0 || leg > 5 || row < 0 || row > 5) {
                fail(path, line, "malformed dh correction");
            }
            c.degenerate = degenerate != 0;
            model.dh[leg][row][dh_param_index(param, path, line)] = c;
        } else if (tag == "pose") {
            std::string param;
            AffineCorrection c;
            int degenerate;
            in >> param >> c.slope >> c.intercept >> degenerate;
            if (in.fail()) fail(path, line, "malformed pose correction");
            c.degenerate = degenerate != 0;
            model.pose[pose_param_index(param, path, line)] = c;
        } else {
            fail(path, line, "unknown record '" + tag + "'");
        }
    }
    if (!have_option) fail(path, 1, "missing option record");
    return model;
}

// ---- DH audit ---------------------------------------------------------------

void write_dh_audit(const std::string& path,
                    const std::vector<std::pair<int, DHChain>>& chains) {
    auto out = open_out(path);
    out << "pose_id,leg,row_index,theta_deg,d_mm,a_mm,alpha_deg\n";
    for (const auto& [pose_id, chain] : chains) {
        for (int row = 0; row < 6; ++row) {
            const DHRow& r = chain.rows[row];
            out << pose_id << "," << chain.leg_index << "," << row << "," << fmt9(r.theta) << ","
                << fmt9(r.d) << "," << fmt9(r.a) << "," << fmt9(r.alpha_link) << "\n";
        }
    }
}

}  // namespace hexcal
