#include "hexcal/simulator.hpp"

#include <cmath>

#include "hexcal/errors.hpp"
#include "hexcal/parallel.hpp"

namespace hexcal {

double SplitMix64::next_normal(double sigma) {
    // Box-Muller; u1 nudged away from 0 so log stays finite.
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-60));
    return sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::vector<PoseVector> generate_random_poses(int n, const PlatformGeometry& geom,
                                              std::uint64_t seed) {
    if (n < 1) throw InvalidInputError("generate_random_poses: n must be >= 1");
    const double margin = 10.0 * geom.singularity_tol;
    SplitMix64 rng(seed);
    std::vector<PoseVector> out;
    out.reserve(n);
    const long budget = 1000L * n;
    for (long tries = 0; tries < budget && static_cast<int>(out.size()) < n; ++tries) {
        Vector6 v;
        for (int k = 0; k < 6; ++k) {
            v[k] = rng.next_uniform(geom.pose_bounds.min[k], geom.pose_bounds.max[k]);
        }
        const PoseVector pose = PoseVector::from_vector(v);
        if (normalized_jacobian_det(pose, geom) < margin) continue;
        if (!inverse_kinematics(pose, geom).valid) continue;
        out.push_back(pose);
    }
    if (static_cast<int>(out.size()) < n) {
        throw ExhaustedSamplingError("generate_random_poses: rejection budget of " +
                                     std::to_string(budget) + " draws exhausted");
    }
    return out;
}

TrueMachine perturb_geometry(const PlatformGeometry& geom, const PerturbationSpec& spec) {
    if (!(spec.joint_position_noise >= 0.0)) {
        throw InvalidInputError("perturb_geometry: joint_position_noise must be >= 0");
    }
    const double b = spec.joint_position_noise;
    SplitMix64 rng(spec.seed);
    TrueMachine machine;
    machine.geometry = geom;
    machine.leg_bias = spec.leg_offset_bias;
    for (auto& joint : machine.geometry.base_joints) {
        for (int k = 0; k < 3; ++k) joint[k] += rng.next_uniform(-b, b);
    }
    for (auto& joint : machine.geometry.platform_joints) {
        for (int k = 0; k < 3; ++k) joint[k] += rng.next_uniform(-b, b);
    }
    machine.geometry.validate();
    return machine;
}

PoseVector simulate_measurement(const PoseVector& target, const PlatformGeometry& nominal,
                                const TrueMachine& truth, const NoiseSpec& noise,
                                int pose_index) {
    LegLengths command = inverse_kinematics(target, nominal);
    for (int i = 0; i < 6; ++i) command.lengths[i] += truth.leg_bias[i];

    PoseVector reached;
    try {
        reached = forward_kinematics(command, truth.geometry, target);
    } catch (const NoConvergenceError&) {
        reached = forward_kinematics(command, truth.geometry, PoseVector::home());
    }

    SplitMix64 rng(SplitMix64::substream(noise.seed, static_cast<std::uint64_t>(pose_index)));
    reached.x += rng.next_normal(noise.position_sigma);
    reached.y += rng.next_normal(noise.position_sigma);
    reached.z += rng.next_normal(noise.position_sigma);
    reached.alpha += rng.next_normal(noise.orientation_sigma);
    reached.beta += rng.next_normal(noise.orientation_sigma);
    reached.gamma += rng.next_normal(noise.orientation_sigma);
    return reached.normalized();
}

CalibrationDataset build_dataset(const std::vector<PoseVector>& targets,
                                 const PlatformGeometry& nominal, const TrueMachine& truth,
                                 const NoiseSpec& noise, int threads) {
    CalibrationDataset ds;
    ds.observations.resize(targets.size());
    // one byte per slot: vector<bool> packs bits and would race across workers
    std::vector<unsigned char> failed(targets.size(), 0);
    parallel_for(targets.size(), threads, [&](std::size_t i) {
        PoseObservation& obs = ds.observations[i];
        obs.pose_id = static_cast<int>(i) + 1;
        obs.target = targets[i];
        try {
            obs.measured =
                simulate_measurement(targets[i], nominal, truth, noise, static_cast<int>(i));
        } catch (const NoConvergenceError&) {
            obs.measured = targets[i];  // placeholder; the row is excluded below
            failed[i] = 1;
        }
    });
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (failed[i]) {
            ds.excluded.emplace(ds.observations[i].pose_id, ExclusionReason::no_convergence);
        }
    }
    return ds;
}

}  // namespace hexcal
