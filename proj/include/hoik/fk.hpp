#pragma once

#include <vector>

#include "hoik/skeleton.hpp"

namespace hoik {

// Joint roles along an activated chain. Exactly one joint is the target;
// `translation` only ever appears at the root; everything off the chain is
// fixed.
enum class JointType { target, rotation, translation, fixed };

struct ChainSpec {
    int chain_index = -1;                 // into KinematicTree::chains
    std::vector<int> joints;              // the chain, root first
    std::vector<JointType> type_of_joint; // per skeleton joint, size == joint_count
    int target_joint = -1;

    // Chain joints that carry twist-swing rotations (type == rotation),
    // in root-to-target order.
    std::vector<int> rotation_joints() const;

    void validate(const KinematicTree& tree) const;
};

// Per-joint twist-swing increments plus the global translation increment.
// Entries are parallel to ChainSpec::rotation_joints().
struct JointTwistSwing {
    int joint = -1;
    double twist_angle = 0.0;            // phi
    double swing_angle = 0.0;            // alpha
    Eigen::Vector3d swing_axis = Eigen::Vector3d::UnitX();  // n, unit, world frame
};

struct TwistSwingParams {
    std::vector<JointTwistSwing> joints;
    Eigen::Vector3d delta_t = Eigen::Vector3d::Zero();

    static TwistSwingParams zero(const ChainSpec& spec);

    // |phi| <= gamma, |alpha| <= gamma, unit swing axes (1e-9), finite delta_t.
    void validate(double gamma) const;
};

struct FkResult {
    std::vector<RigidTransform> transforms;   // T_i, before global translation
    std::vector<Eigen::Vector3d> positions;   // T_i translation + global t
};

// Plain forward kinematics: T_0 = [R_0 | q~_0]; T_i = T_parent * [R_i | q~_i - q~_parent];
// position_i = T_i translation + pose.translation.
FkResult fk(const KinematicTree& tree, const PoseState& pose);

// Unit direction of the bone parent(i) -> i from world joint positions.
// Throws DegenerateGeometry when the bone is shorter than 1e-8.
Eigen::Vector3d twist_direction(const std::vector<Eigen::Vector3d>& joint_positions,
                                const KinematicTree& tree, int joint);

struct ImprovedFkResult {
    std::vector<Eigen::Vector3d> positions;       // all joints, includes t + delta_t
    Eigen::Vector3d target_position;              // q_j
    // Local rotation increment applied at each chain rotation joint, parallel
    // to ChainSpec::rotation_joints(); used to bake the final pose.
    std::vector<Eigen::Matrix3d> local_delta_r;
};

// Twist-swing forward kinematics. Joints on the active chain compose an extra
// rotation R_tw(m, phi) * R_sw(n, alpha) after their relative transform; the
// twist axis m is the current bone direction, and both axes are world-frame
// directions mapped into the joint's local frame before composing. Joints off
// the chain keep their plain-FK positions shifted by delta_t only.
ImprovedFkResult improved_fk(const KinematicTree& tree, const PoseState& pose,
                             const TwistSwingParams& ts, const ChainSpec& active);

}  // namespace hoik
