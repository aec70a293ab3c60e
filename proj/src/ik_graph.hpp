#pragma once

// Internal: taped computation graphs shared by the neural and trust-region
// solvers. Both decode a raw output vector into twist-swing parameters, run
// the chain forward kinematics and score L_IK; they differ only in what
// produces the raw vector (MLP weights vs. direct variables).

#include <vector>

#include "hoik/camera.hpp"
#include "hoik/fk.hpp"
#include "hoik/ik.hpp"
#include "hoik/skeleton.hpp"
#include "hoik/tape.hpp"

namespace hoik::detail {

using NodeId = Tape::NodeId;

inline int raw_output_dim(const ChainSpec& chain) {
    return 5 * static_cast<int>(chain.rotation_joints().size()) + 3;
}

// Rest-pose bone direction, used to seed and to rescue degenerate swing axes.
Eigen::Vector3d rest_bone_direction(const KinematicTree& tree, int joint);

struct DecodedNodes {
    std::vector<NodeId> sin_phi, cos_phi, sin_alpha, cos_alpha, axis;
    NodeId delta_t = -1;
};

// y layout: per rotation joint [y_phi, y_alpha, raw axis x3], then delta_t.
DecodedNodes build_decode(Tape& tape, NodeId y, const KinematicTree& tree,
                          const ChainSpec& chain, double gamma);

struct ChainNodes {
    NodeId target_pos = -1;  // q_j, includes global translation + delta_t
    NodeId root_pos = -1;    // q_0, includes global translation + delta_t
};

ChainNodes build_chain_fk(Tape& tape, const KinematicTree& tree, const PoseState& pose,
                          const ChainSpec& chain, const DecodedNodes& decoded);

struct LossNodes {
    NodeId loss = -1;
    NodeId depth = -1;  // camera-space z of the root, checked > 1e-6 per step
};

// Literal L_IK: eps1 * mean over target points + eps2 * squared 2D residual.
LossNodes build_loss(Tape& tape, const ChainNodes& chain_nodes, const IKProblem& problem,
                     const SolverConfig& config);

struct ResidualNodes {
    std::vector<NodeId> components;  // 5 scalars: sqrt(eps1)*(q_j - centroid), sqrt(eps2)*2D
    NodeId loss = -1;                // full L_IK (includes the constant point-spread term)
    NodeId depth = -1;
};

// Least-squares form used by the trust-region baseline. mean_p ||q - p||^2
// expands to ||q - centroid||^2 plus a constant spread term, so the same
// L_IK value is recovered from 5 residual components plus that constant.
ResidualNodes build_residuals(Tape& tape, const ChainNodes& chain_nodes, const IKProblem& problem,
                              const SolverConfig& config);

// Extract concrete twist-swing parameters from the decoded nodes.
TwistSwingParams read_twist_swing(const Tape& tape, const DecodedNodes& decoded,
                                  const ChainSpec& chain);

// Iteration-level bookkeeping shared by both solvers.
void track_angle_extrema(const Tape& tape, const DecodedNodes& decoded, SolveResult& result);

// Bake the final chain rotations into the pose and fill the result's
// geometric report fields.
void finalize_result(const KinematicTree& tree, const IKProblem& problem, const ChainSpec& chain,
                     SolveResult& result);

}  // namespace hoik::detail
