#include "hexcal/calibration.hpp"

#include <cmath>

#include "hexcal/errors.hpp"
#include "hexcal/parallel.hpp"

namespace hexcal {

const std::array<const char*, 4> kDhParamNames = {"theta", "d", "a", "alpha"};

const char* exclusion_reason_name(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::outlier: return "outlier";
        case ExclusionReason::out_of_range: return "out_of_range";
        case ExclusionReason::no_convergence: return "no_convergence";
    }
    return "unknown";
}

std::vector<PoseObservation> CalibrationDataset::active() const {
    std::vector<PoseObservation> out;
    out.reserve(observations.size());
    for (const auto& obs : observations) {
        if (!excluded.contains(obs.pose_id)) out.push_back(obs);
    }
    return out;
}

Vector6 error_vector(const PoseObservation& obs) {
    Vector6 e;
    e[0] = obs.measured.x - obs.target.x;
    e[1] = obs.measured.y - obs.target.y;
    e[2] = obs.measured.z - obs.target.z;
    e[3] = angle_diff_deg(obs.measured.alpha, obs.target.alpha);
    e[4] = angle_diff_deg(obs.measured.beta, obs.target.beta);
    e[5] = angle_diff_deg(obs.measured.gamma, obs.target.gamma);
    return e;
}

double AffineCorrection::apply(double target) const {
    const double denom = 1.0 + slope;
    if (std::abs(denom) < 1e-9) {
        // A fitted slope of -1 would mean the error cancels the command
        // entirely; treat as intercept-only rather than divide by ~0.
        return target - intercept;
    }
    return (target - intercept) / denom;
}

AffineCorrection fit_affine(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InvalidInputError("fit_affine: size mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw InsufficientDataError("fit_affine: needs at least 2 points");

    double xmin = xs[0], xmax = xs[0];
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);

    AffineCorrection fit;
    if (xmin == xmax) {
        fit.degenerate = true;
        fit.intercept = my;
        return fit;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) {  // identical up to rounding
        fit.degenerate = true;
        fit.intercept = my;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

namespace {

// Joint-variable values of one chain in fit order [row][param].
using ChainParams = std::array<std::array<double, 4>, 6>;

ChainParams chain_params(const DHChain& c) {
    ChainParams p;
    for (int r = 0; r < 6; ++r) {
        p[r] = {c.rows[r].theta, c.rows[r].d, c.rows[r].a, c.rows[r].alpha_link};
    }
    return p;
}

bool is_angle_param(int param) { return param == 0 || param == 3; }  // theta, alpha

struct ChainSet {
    std::array<DHChain, 6> legs;
};

std::vector<ChainSet> extract_all_chains(const std::vector<PoseObservation>& obs,
                                         const PlatformGeometry& geom, bool measured,
                                         int threads) {
    std::vector<ChainSet> out(obs.size());
    parallel_for(obs.size(), threads, [&](std::size_t i) {
        const PoseVector& pose = measured ? obs[i].measured : obs[i].target;
        try {
            for (int leg = 0; leg < 6; ++leg) {
                out[i].legs[leg] = extract_dh_chain(pose, geom, leg);
            }
        } catch (const SingularPoseError& e) {
            throw SingularPoseError(std::string(e.what()) + " (pose_id " +
                                        std::to_string(obs[i].pose_id) + ")",
                                    obs[i].pose_id);
        }
    });
    return out;
}

void fit_dh_corrections(CompensationModel& model, const std::vector<PoseObservation>& obs,
                        const PlatformGeometry& geom, int threads) {
    const auto target_chains = extract_all_chains(obs, geom, false, threads);
    const auto measured_chains = extract_all_chains(obs, geom, true, threads);

    const std::size_t n = obs.size();
    std::vector<double> xs(n), ys(n);
    for (int leg = 0; leg < 6; ++leg) {
        std::vector<ChainParams> tp(n), mp(n);
        for (std::size_t i = 0; i < n; ++i) {
            tp[i] = chain_params(target_chains[i].legs[leg]);
            mp[i] = chain_params(measured_chains[i].legs[leg]);
        }
        for (int row = 0; row < 6; ++row) {
            for (int param = 0; param < 4; ++param) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double t = tp[i][row][param];
                    const double m = mp[i][row][param];
                    xs[i] = t;
                    ys[i] = is_angle_param(param) ? angle_diff_deg(m, t) : m - t;
                }
                model.dh[leg][row][param] = fit_affine(xs, ys);
            }
        }
    }
}

void fit_pose_corrections(CompensationModel& model, const std::vector<PoseObservation>& obs,
                          bool orientation_only) {
    const std::size_t n = obs.size();
    std::vector<double> xs(n), ys(n);
    for (int k = orientation_only ? 3 : 0; k < 6; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = obs[i].target.as_vector()[k];
            ys[i] = error_vector(obs[i])[k];
        }
        model.pose[k] = fit_affine(xs, ys);
    }
}

PoseVector predict_through_dh(const CompensationModel& model, const PoseVector& target,
                              const PlatformGeometry& geom) {
    std::array<Eigen::Vector3d, 6> positions;
    for (int leg = 0; leg < 6; ++leg) {
        DHChain chain = extract_dh_chain(target, geom, leg);
        for (int row = 0; row < 6; ++row) {
            const auto& c = model.dh[leg][row];
            chain.rows[row].theta = c[0].apply(chain.rows[row].theta);
            chain.rows[row].d = c[1].apply(chain.rows[row].d);
            chain.rows[row].a = c[2].apply(chain.rows[row].a);
            chain.rows[row].alpha_link = c[3].apply(chain.rows[row].alpha_link);
        }
        positions[leg] = chain_forward(chain).translation;
    }
    const Eigen::Vector3d lg = unify_positions(positions) - geom.lower_grip_home();
    PoseVector out = target;  // orientation components pass through
    out.x = lg.x();
    out.y = lg.y();
    out.z = lg.z();
    return out;
}

}  // namespace

CompensationModel fit_compensation(const CalibrationDataset& ds, const PlatformGeometry& geom,
                                   int option, int threads) {
    if (option < 1 || option > 3) throw InvalidInputError("fit_compensation: option must be 1..3");
    const auto obs = ds.active();
    if (obs.size() < 2) {
        throw InsufficientDataError("fit_compensation: needs at least 2 usable observations");
    }
    CompensationModel model;
    model.option = option;
    if (option == 1 || option == 2) fit_dh_corrections(model, obs, geom, threads);
    if (option == 2) fit_pose_corrections(model, obs, /*orientation_only=*/true);
    if (option == 3) fit_pose_corrections(model, obs, /*orientation_only=*/false);
    return model;
}

std::vector<std::pair<int, PoseVector>> apply_compensation(
    const CompensationModel& model, const std::vector<std::pair<int, PoseVector>>& targets,
    const PlatformGeometry& geom, int threads) {
    std::vector<std::pair<int, PoseVector>> out(targets.size());
    parallel_for(targets.size(), threads, [&](std::size_t i) {
        const auto& [id, target] = targets[i];
        PoseVector predicted;
        if (model.option == 3) {
            Vector6 t = target.as_vector();
            Vector6 p;
            for (int k = 0; k < 6; ++k) p[k] = model.pose[k].apply(t[k]);
            predicted = PoseVector::from_vector(p).normalized();
        } else {
            try {
                predicted = predict_through_dh(model, target, geom);
            } catch (const SingularPoseError& e) {
                throw SingularPoseError(
                    std::string(e.what()) + " (pose_id " + std::to_string(id) + ")", id);
            }
            if (model.option == 2) {
                predicted.alpha = normalize_angle_deg(model.pose[3].apply(target.alpha));
                predicted.beta = normalize_angle_deg(model.pose[4].apply(target.beta));
                predicted.gamma = normalize_angle_deg(model.pose[5].apply(target.gamma));
            }
        }
        out[i] = {id, predicted};
    });
    return out;
}

namespace {

std::vector<std::pair<int, PoseVector>> compensate(const CalibrationDataset& ds,
                                                   const PlatformGeometry& geom, int option,
                                                   int threads) {
    const CompensationModel model = fit_compensation(ds, geom, option, threads);
    std::vector<std::pair<int, PoseVector>> targets;
    for (const auto& obs : ds.active()) targets.emplace_back(obs.pose_id, obs.target);
    return apply_compensation(model, targets, geom, threads);
}

}  // namespace

std::vector<std::pair<int, PoseVector>> compensate_option1(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom,
                                                           int threads) {
    return compensate(ds, geom, 1, threads);
}

std::vector<std::pair<int, PoseVector>> compensate_option2(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom,
                                                           int threads) {
    return compensate(ds, geom, 2, threads);
}

std::vector<std::pair<int, PoseVector>> compensate_option3(const CalibrationDataset& ds,
                                                           const PlatformGeometry& geom) {
    return compensate(ds, geom, 3, 1);
}

FilterResult filter_workspace(const std::vector<std::pair<int, PoseVector>>& predicted,
                              const PlatformGeometry& geom) {
    FilterResult result;
    for (const auto& [id, pose] : predicted) {
        std::string reason;
        const Vector6 v = pose.as_vector();
        for (int k = 0; k < 6 && reason.empty(); ++k) {
            if (v[k] < geom.pose_bounds.min[k]) {
                reason = std::string(kPoseParamNames[k]) + " below bound";
            } else if (v[k] > geom.pose_bounds.max[k]) {
                reason = std::string(kPoseParamNames[k]) + " above bound";
            }
        }
        if (reason.empty()) {
            const LegLengths legs = inverse_kinematics(pose, geom);
            for (int i = 0; i < 6 && reason.empty(); ++i) {
                if (legs.lengths[i] > geom.leg_max) {
                    reason = "leg " + std::to_string(i) + " over-extended";
                } else if (legs.lengths[i] < geom.leg_min) {
                    reason = "leg " + std::to_string(i) + " under-extended";
                }
            }
        }
        if (reason.empty()) {
            result.kept.emplace_back(id, pose);
        } else {
            result.dropped.push_back({id, pose, reason});
        }
    }
    return result;
}

std::vector<std::pair<int, double>> detect_outliers(const CalibrationDataset& ds,
                                                    const PlatformGeometry& geom) {
    std::vector<std::pair<int, double>> flagged;
    const double margin = 10.0 * geom.singularity_tol;
    for (const auto& obs : ds.observations) {
        if (ds.excluded.contains(obs.pose_id)) continue;
        const double det = normalized_jacobian_det(obs.target, geom);
        if (det < margin) flagged.emplace_back(obs.pose_id, det);
    }
    return flagged;
}

}  // namespace hexcal
