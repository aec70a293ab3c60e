#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hoik/camera.hpp"
#include "hoik/fk.hpp"
#include "hoik/mlp.hpp"
#include "hoik/skeleton.hpp"

namespace hoik {

// One IK problem: drive the chain's target joint into the contact region.
struct IKProblem {
    PoseState initial_pose;
    std::vector<Eigen::Vector3d> target_points;  // contact region, meters
    int part_label = 0;                          // 1..14
    Eigen::Vector2d root_2d = Eigen::Vector2d::Zero();  // observed root pixel
    PinholeCamera camera;

    void validate(const KinematicTree& tree) const;

    Eigen::Vector3d target_centroid() const;
};

struct SolverConfig {
    double gamma = 0.5235987755982988;  // 30 deg, bound on |phi| and |alpha|
    double eps1 = 1.0;                  // 3D residual weight
    double eps2 = 1e-4;                 // 2D root residual weight
    double learning_rate = 1e-2;
    int max_iterations = 500;
    double stop_factor = 0.01;          // stop when loss < stop_factor * initial
    std::uint64_t seed = 0;
    std::vector<int> hidden_sizes = {256, 256};

    void validate() const;
};

enum class StopReason { converged, already_converged, max_iters_reached, stalled };

std::string to_string(StopReason reason);

struct SolveResult {
    PoseState final_pose;        // initial pose with the chain rotations baked in
    TwistSwingParams params;     // final twist-swing increments
    double initial_loss = 0.0;   // xi
    double final_loss = 0.0;
    int iterations = 0;
    StopReason stop_reason = StopReason::converged;
    std::vector<double> loss_history;    // loss after each iteration
    double max_abs_twist = 0.0;          // over all iterations
    double max_abs_swing = 0.0;
    Eigen::Vector3d target_position = Eigen::Vector3d::Zero();  // final q_j
    double mean_target_distance = 0.0;   // mean over target points, meters
    double off_target_rotation = 0.0;    // sum of |phi| + |alpha|, radians
};

// Chain activation for a contact body part: picks the chain containing the
// part, truncated at the part's most distal chain joint (the target). The
// root is the translation joint, intermediate joints rotate, everything else
// is fixed. Label 15 (no-contact) is not a drivable target.
ChainSpec activate_chain(const KinematicTree& tree, int part_label);

// L_IK: eps1 * mean_p ||q_j - p||^2 + eps2 * ||q0_2d - observed||^2.
double loss_ik(const Eigen::Vector3d& target_joint_pos,
               const std::vector<Eigen::Vector3d>& target_points,
               const Eigen::Vector2d& root_2d, const Eigen::Vector2d& observed_root_2d,
               double eps1, double eps2);

// Decode a raw solver output vector (y_phi, y_alpha, raw axis per rotation
// joint, then delta_t) into twist-swing parameters. Angles are saturated via
// sin(phi) = sin(gamma) * tanh(y_phi); a raw axis with norm < 1e-8 falls back
// to the joint's rest-pose bone direction.
TwistSwingParams decode_twist_swing(const Eigen::VectorXd& raw, const KinematicTree& tree,
                                    const ChainSpec& chain, double gamma);

// MLP forward + decode: the solver's parameter head.
TwistSwingParams mlp_forward(const MLPParams& params, const KinematicTree& tree,
                             const ChainSpec& chain, const IKProblem& problem,
                             const SolverConfig& config);

// Plain (untaped) evaluation of the full pipeline for given MLP parameters:
// mlp_forward -> improved_fk -> loss_ik with the projected root.
double ik_loss(const KinematicTree& tree, const IKProblem& problem, const SolverConfig& config,
               const MLPParams& params);

struct LossGradients {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> weight_grads;
    std::vector<Eigen::VectorXd> bias_grads;
};

// Taped evaluation: loss plus exact reverse-mode gradients w.r.t. every MLP
// weight and bias.
LossGradients ik_loss_gradients(const KinematicTree& tree, const IKProblem& problem,
                                const SolverConfig& config, const MLPParams& params);

// Online neural IK: per-problem MLP fitted by an adaptive gradient method on
// exact reverse-mode gradients of L_IK; stops when the loss drops below
// stop_factor * initial or the iteration budget runs out.
SolveResult solve_ik(const KinematicTree& tree, const IKProblem& problem,
                     const SolverConfig& config);

// Baseline: dogleg trust-region nonlinear least squares over the raw
// twist-swing variables themselves (same residual, same stopping rule).
SolveResult solve_ik_trm(const KinematicTree& tree, const IKProblem& problem,
                         const SolverConfig& config);

}  // namespace hoik
