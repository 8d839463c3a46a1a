// hexcal: Stewart-platform kinematics and least-squares calibration CLI.
//
// Exit codes: 0 success, 1 input error, 2 validity warning,
// 3 insufficient data.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexcal/errors.hpp"
#include "hexcal/io.hpp"
#include "hexcal/metrics.hpp"
#include "hexcal/parallel.hpp"
#include "hexcal/simulator.hpp"

namespace {

using namespace hexcal;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitValidityWarning = 2;
constexpr int kExitInsufficientData = 3;

PoseVector pose_from_args(const std::vector<double>& v) {
    return PoseVector{v[0], v[1], v[2], v[3], v[4], v[5]}.normalized();
}

std::string pose_line(const PoseVector& p) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f %.6f %.6f", p.x, p.y, p.z, p.alpha,
                  p.beta, p.gamma);
    return buf;
}

int run_ik(const std::string& geometry_path, const std::vector<double>& pose_args) {
    const PlatformGeometry geom = load_geometry(geometry_path);
    const PoseVector pose = pose_from_args(pose_args);
    const LegLengths legs = inverse_kinematics(pose, geom);
    char buf[32];
    std::string line;
    for (int i = 0; i < 6; ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", legs.lengths[i]);
        if (i) line += ' ';
        line += buf;
    }
    std::cout << line << "\n" << (legs.valid ? "valid" : "invalid") << "\n";
    return legs.valid ? kExitOk : kExitValidityWarning;
}

int run_fk(const std::string& geometry_path, const std::vector<double>& leg_args,
           const std::vector<double>& guess_args) {
    const PlatformGeometry geom = load_geometry(geometry_path);
    LegLengths legs;
    std::copy(leg_args.begin(), leg_args.end(), legs.lengths.begin());
    const PoseVector guess =
        guess_args.empty() ? PoseVector::home() : pose_from_args(guess_args);
    const PoseVector pose = forward_kinematics(legs, geom, guess);
    std::cout << pose_line(pose) << "\n";
    return kExitOk;
}

int run_simulate(const std::string& scenario_path, const std::string& output_path,
                 const std::optional<std::string>& geometry_override,
                 const std::optional<std::uint64_t>& seed_override, int threads) {
    const Scenario sc = load_scenario(scenario_path, geometry_override, seed_override);
    const auto targets = generate_random_poses(sc.pose_count, sc.geometry, sc.seed);
    const TrueMachine truth = perturb_geometry(sc.geometry, sc.perturbation);
    const CalibrationDataset ds = build_dataset(targets, sc.geometry, truth, sc.noise, threads);
    write_dataset_csv(output_path, ds);
    std::cout << "wrote " << ds.observations.size() << " observations to " << output_path;
    if (!ds.excluded.empty()) std::cout << " (" << ds.excluded.size() << " excluded)";
    std::cout << "\n";
    return kExitOk;
}

int run_calibrate(const std::string& dataset_path, const std::string& geometry_path, int option,
                  const std::string& model_path, const std::string& predictions_path,
                  const std::string& report_base, const std::string& dh_audit_path,
                  int threads) {
    const PlatformGeometry geom = load_geometry(geometry_path);
    CalibrationDataset ds = read_dataset_csv(dataset_path);
    validate_dataset(ds, geom);

    for (const auto& [pose_id, det] : detect_outliers(ds, geom)) {
        std::cerr << "excluding pose " << pose_id << ": near-singular target (normalized |det| "
                  << fmt9(det) << ")\n";
        ds.excluded.emplace(pose_id, ExclusionReason::outlier);
    }
    if (ds.active().size() < 2) {
        std::cerr << "error: fewer than 2 usable observations after exclusions\n";
        return kExitInsufficientData;
    }

    const CompensationModel model = fit_compensation(ds, geom, option, threads);
    std::vector<std::pair<int, PoseVector>> targets;
    for (const auto& obs : ds.active()) targets.emplace_back(obs.pose_id, obs.target);
    const auto predicted = apply_compensation(model, targets, geom, threads);

    const FilterResult filtered = filter_workspace(predicted, geom);
    for (const auto& drop : filtered.dropped) {
        std::cerr << "dropping predicted pose " << drop.pose_id << ": " << drop.reason << "\n";
    }

    save_model(model_path, model);

    std::vector<PredictedPose> rows;
    for (const auto& [id, pose] : filtered.kept) {
        for (const auto& obs : ds.observations) {
            if (obs.pose_id == id) {
                rows.push_back({id, obs.target, pose});
                break;
            }
        }
    }
    write_predictions_csv(predictions_path, rows);

    // The report at this stage covers the uncompensated dataset errors; it is
    // the baseline a later verify run measures improvements against.
    const ErrorReport report = build_report(ds);
    std::ofstream(report_base + ".txt", std::ios::binary) << render_report_text(report);
    write_report_csv(report_base + ".csv", report);

    if (!dh_audit_path.empty() && (option == 1 || option == 2)) {
        std::vector<std::pair<int, DHChain>> chains;
        for (const auto& obs : ds.active()) {
            for (int leg = 0; leg < 6; ++leg) {
                chains.emplace_back(obs.pose_id, extract_dh_chain(obs.target, geom, leg));
            }
        }
        write_dh_audit(dh_audit_path, chains);
    }

    std::cout << "option " << option << ": kept " << filtered.kept.size() << " of "
              << predicted.size() << " predictions (" << filtered.dropped.size()
              << " dropped, " << ds.excluded.size() << " excluded)\n";
    return kExitOk;
}

int run_verify(const std::string& predictions_path, const std::string& scenario_path,
               const std::optional<std::string>& geometry_override,
               const std::optional<std::uint64_t>& seed_override,
               const std::string& baseline_path, const std::string& output_base, int threads) {
    const Scenario sc = load_scenario(scenario_path, geometry_override, seed_override);
    const auto rows = read_predictions_csv(predictions_path);
    if (rows.empty()) {
        std::cerr << "error: no predictions in " << predictions_path << "\n";
        return kExitInputError;
    }

    // The scenario regenerates the target list; every prediction row must
    // reference one of those poses or the two files do not belong together.
    const auto targets = generate_random_poses(sc.pose_count, sc.geometry, sc.seed);
    std::vector<char> seen(targets.size(), 0);
    for (const auto& row : rows) {
        if (row.pose_id < 1 || row.pose_id > static_cast<int>(targets.size()) ||
            seen[row.pose_id - 1]) {
            std::cerr << "error: pose_id " << row.pose_id << " does not match the scenario\n";
            return kExitInputError;
        }
        seen[row.pose_id - 1] = 1;
        const Vector6 delta = row.target.as_vector() - targets[row.pose_id - 1].as_vector();
        if (delta.cwiseAbs().maxCoeff() > 1e-5) {
            std::cerr << "error: pose " << row.pose_id
                      << ": target disagrees with the scenario's pose list\n";
            return kExitInputError;
        }
    }

    const TrueMachine truth = perturb_geometry(sc.geometry, sc.perturbation);
    std::vector<Vector6> errors(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const auto& row = rows[i];
        const PoseVector measured = simulate_measurement(row.predicted, sc.geometry, truth,
                                                         sc.noise, row.pose_id - 1);
        errors[i] = error_vector({row.pose_id, row.target, measured});
    });

    std::optional<ErrorReport> baseline;
    if (!baseline_path.empty()) baseline = read_report_csv(baseline_path);
    const ErrorReport report = report_from_errors(errors, baseline);

    std::ofstream(output_base + ".txt", std::ios::binary)
        << render_report_text(report, baseline);
    write_report_csv(output_base + ".csv", report, baseline);
    std::cout << render_report_text(report, baseline);
    return kExitOk;
}

int run_report(const std::string& input_path, const std::string& baseline_path,
               const std::string& output_base) {
    std::ifstream probe(input_path, std::ios::binary);
    if (!probe) {
        std::cerr << "error: cannot open " << input_path << "\n";
        return kExitInputError;
    }
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();

    std::vector<std::pair<int, Vector6>> abs_rows;
    std::vector<Vector6> errors;
    if (header == kDatasetCsvHeader) {
        const CalibrationDataset ds = read_dataset_csv(input_path);
        for (const auto& obs : ds.active()) {
            const Vector6 e = error_vector(obs);
            errors.push_back(e);
            abs_rows.emplace_back(obs.pose_id, e.cwiseAbs());
        }
    } else if (header == kErrorCsvHeader) {
        for (const auto& [id, e] : read_error_csv(input_path)) {
            errors.push_back(e);
            abs_rows.emplace_back(id, e.cwiseAbs());
        }
    } else {
        std::cerr << "error: " << input_path << " is neither a dataset nor an error CSV\n";
        return kExitInputError;
    }
    if (errors.empty()) {
        std::cerr << "error: no usable rows in " << input_path << "\n";
        return kExitInputError;
    }

    std::optional<ErrorReport> baseline;
    if (!baseline_path.empty()) baseline = read_report_csv(baseline_path);
    const ErrorReport report = report_from_errors(errors, baseline);

    std::ofstream(output_base + ".txt", std::ios::binary)
        << render_report_text(report, baseline);
    write_report_csv(output_base + ".csv", report, baseline);
    write_error_csv(output_base + "_errors.csv", abs_rows);
    std::cout << render_report_text(report, baseline);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stewart-platform kinematics and least-squares calibration toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string geometry_path;
    std::optional<std::uint64_t> seed_override;
    int threads = 1;
    app.add_option("--geometry,-g", geometry_path, "platform geometry file");
    app.add_option("--seed", seed_override, "override the scenario seed");
    app.add_option("--threads", threads, "worker threads for batch steps")
        ->check(CLI::PositiveNumber);

    std::vector<double> pose_args, leg_args, guess_args;
    auto* ik = app.add_subcommand("ik", "leg lengths for a pose (x y z alpha beta gamma)");
    ik->add_option("pose", pose_args, "pose: x y z alpha beta gamma (mm, deg)")
        ->expected(6)
        ->required();

    auto* fk = app.add_subcommand("fk", "pose for six leg lengths");
    fk->add_option("legs", leg_args, "leg lengths l0..l5 (mm)")->expected(6)->required();
    fk->add_option("--guess", guess_args, "starting pose (default: home)")->expected(6);

    std::string scenario_path, output_path;
    auto* simulate = app.add_subcommand("simulate", "generate a measured dataset from a scenario");
    simulate->add_option("scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--output,-o", output_path, "dataset CSV to write")->required();

    std::string dataset_path, model_path, predictions_path, report_base, dh_audit_path;
    std::string calibrate_output;
    int option = 0;
    auto* calibrate = app.add_subcommand("calibrate", "fit a compensation option to a dataset");
    calibrate->add_option("dataset", dataset_path, "dataset CSV")->required();
    calibrate->add_option("--option", option, "compensation option (1, 2 or 3)")
        ->required()
        ->check(CLI::Range(1, 3));
    calibrate->add_option("--model", model_path, "model file to write");
    calibrate->add_option("--predictions", predictions_path, "predicted-pose CSV to write");
    calibrate->add_option("--report", report_base, "report base path (writes .txt and .csv)");
    calibrate->add_option("--dh-audit", dh_audit_path, "DH side-table CSV (options 1-2)");
    calibrate->add_option("--output,-o", calibrate_output,
                          "base path filling in any unset output (<base>_model.txt, ...)");

    std::string verify_predictions, verify_scenario, verify_baseline, verify_output;
    auto* verify = app.add_subcommand("verify", "re-measure predictions and report improvement");
    verify->add_option("predictions", verify_predictions, "predictions CSV from calibrate")
        ->required();
    verify->add_option("--scenario", verify_scenario, "scenario file")->required();
    verify->add_option("--baseline", verify_baseline, "baseline report CSV");
    verify->add_option("--output,-o", verify_output, "report base path")->required();

    std::string report_input, report_baseline, report_output;
    auto* report = app.add_subcommand("report", "error-range report from a dataset or error CSV");
    report->add_option("input", report_input, "dataset CSV or per-pose error CSV")->required();
    report->add_option("--baseline", report_baseline, "baseline report CSV");
    report->add_option("--output,-o", report_output, "report base path")->required();

    CLI11_PARSE(app, argc, argv);

    const std::optional<std::string> geometry_override =
        geometry_path.empty() ? std::nullopt : std::make_optional(geometry_path);

    try {
        if (*ik || *fk) {
            if (geometry_path.empty()) {
                std::cerr << "error: --geometry is required\n";
                return kExitInputError;
            }
            return *ik ? run_ik(geometry_path, pose_args)
                       : run_fk(geometry_path, leg_args, guess_args);
        }
        if (*simulate) {
            return run_simulate(scenario_path, output_path, geometry_override, seed_override,
                                threads);
        }
        if (*calibrate) {
            if (geometry_path.empty()) {
                std::cerr << "error: --geometry is required\n";
                return kExitInputError;
            }
            auto fill = [&](std::string& value, const std::string& suffix) -> bool {
                if (value.empty() && !calibrate_output.empty()) {
                    value = calibrate_output + suffix;
                }
                return !value.empty();
            };
            if (!fill(model_path, "_model.txt") || !fill(predictions_path, "_predictions.csv") ||
                !fill(report_base, "_report")) {
                std::cerr << "error: missing output path (--model/--predictions/--report or "
                             "--output base)\n";
                return kExitInputError;
            }
            return run_calibrate(dataset_path, geometry_path, option, model_path,
                                 predictions_path, report_base, dh_audit_path, threads);
        }
        if (*verify) {
            return run_verify(verify_predictions, verify_scenario, geometry_override,
                              seed_override, verify_baseline, verify_output, threads);
        }
        if (*report) {
            return run_report(report_input, report_baseline, report_output);
        }
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
