#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hoik {

inline constexpr int kBodyJointCount = 24;
inline constexpr int kBodyPartCount = 14;
inline constexpr int kNoContactLabel = 15;
inline constexpr int kRootParent = -1;

// Rigid transform stored as rotation + translation; composes like a 4x4
// homogeneous matrix with bottom row (0,0,0,1).
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    RigidTransform operator*(const RigidTransform& rhs) const {
        return {rotation * rhs.rotation, rotation * rhs.translation + translation};
    }
    Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }
    Eigen::Matrix4d matrix() const {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m.topLeftCorner<3, 3>() = rotation;
        m.topRightCorner<3, 1>() = translation;
        return m;
    }
    bool is_valid(double tol = 1e-9) const;
};

// Named root-to-extremity joint path. Chains always start at the root joint.
struct ChainDef {
    std::string name;
    std::vector<int> joints;
};

// Body skeleton: parent table, rest-pose template and, for full skeleton
// definitions, the five kinematic chains and the joint -> body-part table.
//
// Small trees without chains/parts are valid for plain kinematics (validate());
// skeletons driving the IK solver must pass validate_full().
struct KinematicTree {
    std::vector<int> parents;                 // parents[0] == kRootParent
    std::vector<Eigen::Vector3d> rest_template;
    std::vector<ChainDef> chains;             // empty or exactly five
    std::vector<int> part_of_joint;           // empty or per-joint label in 1..14
    std::vector<std::string> joint_names;     // optional

    int joint_count() const { return static_cast<int>(parents.size()); }

    // Structural invariants: single tree rooted at joint 0, finite template,
    // matching sizes. Throws StructuralError.
    void validate() const;

    // validate() plus: 24 joints, exactly five chains each starting at the
    // root and consecutive in the parent table, part labels in 1..14.
    void validate_full() const;

    // Joints listed root-first so parents always precede children.
    std::vector<int> topological_order() const;
};

// Per-joint axis-angle rotations plus global translation.
struct PoseState {
    Eigen::Matrix<double, Eigen::Dynamic, 3> theta;  // one row per joint
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static PoseState zero(int joints);

    // Finite entries, per-joint magnitude <= pi (after canonicalize()).
    void validate(int expected_joints) const;
    // Wraps each row to the equivalent axis-angle with magnitude <= pi.
    void canonicalize();
};

}  // namespace hoik
