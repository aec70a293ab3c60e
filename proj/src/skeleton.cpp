#include "hoik/skeleton.hpp"

#include <cmath>
#include <numbers>

#include "hoik/errors.hpp"
#include "hoik/rotation.hpp"

namespace hoik {

bool RigidTransform::is_valid(double tol) const {
    return translation.allFinite() && is_rotation(rotation, tol);
}

void KinematicTree::validate() const {
    const int n = joint_count();
    if (n < 1) {
        throw StructuralError("tree: no joints");
    }
    if (static_cast<int>(rest_template.size()) != n) {
        throw StructuralError("tree: rest_template size does not match joint count");
    }
    if (parents[0] != kRootParent) {
        throw StructuralError("tree: joint 0 must be the root");
    }
    for (int i = 1; i < n; ++i) {
        if (parents[i] < 0 || parents[i] >= n || parents[i] == i) {
            throw StructuralError("tree: bad parent index at joint " + std::to_string(i));
        }
    }
    // Walk each joint to the root; a walk longer than n means a cycle.
    for (int i = 0; i < n; ++i) {
        int j = i;
        int steps = 0;
        while (j != 0) {
            j = parents[j];
            if (++steps > n) {
                throw StructuralError("tree: cycle detected at joint " + std::to_string(i));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!rest_template[i].allFinite()) {
            throw StructuralError("tree: non-finite template position at joint " + std::to_string(i));
        }
    }
    if (!part_of_joint.empty() && static_cast<int>(part_of_joint.size()) != n) {
        throw StructuralError("tree: part table size does not match joint count");
    }
}

void KinematicTree::validate_full() const {
    validate();
    if (joint_count() != kBodyJointCount) {
        throw StructuralError("skeleton: expected 24 joints, got " + std::to_string(joint_count()));
    }
    if (chains.size() != 5) {
        throw StructuralError("skeleton: expected exactly five chains");
    }
    for (const auto& chain : chains) {
        if (chain.joints.empty() || chain.joints.front() != 0) {
            throw StructuralError("skeleton: chain '" + chain.name + "' must start at the root");
        }
        for (size_t k = 1; k < chain.joints.size(); ++k) {
            const int j = chain.joints[k];
            if (j < 0 || j >= joint_count() || parents[j] != chain.joints[k - 1]) {
                throw StructuralError("skeleton: chain '" + chain.name +
                                      "' is not a parent-consecutive path");
            }
        }
    }
    if (part_of_joint.empty()) {
        throw StructuralError("skeleton: missing joint part table");
    }
    for (int i = 0; i < joint_count(); ++i) {
        if (part_of_joint[i] < 1 || part_of_joint[i] > kBodyPartCount) {
            throw StructuralError("skeleton: part label out of range at joint " + std::to_string(i));
        }
    }
}

std::vector<int> KinematicTree::topological_order() const {
    const int n = joint_count();
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> placed(n, 0);
    order.push_back(0);
    placed[0] = 1;
    // Repeated sweeps; validate() guarantees termination.
    while (static_cast<int>(order.size()) < n) {
        bool progressed = false;
        for (int i = 1; i < n; ++i) {
            if (!placed[i] && placed[parents[i]]) {
                order.push_back(i);
                placed[i] = 1;
                progressed = true;
            }
        }
        if (!progressed) {
            throw StructuralError("tree: unreachable joints (cycle?)");
        }
    }
    return order;
}

PoseState PoseState::zero(int joints) {
    PoseState pose;
    pose.theta = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(joints, 3);
    return pose;
}

void PoseState::validate(int expected_joints) const {
    if (theta.rows() != expected_joints) {
        throw InvalidArgument("pose: expected " + std::to_string(expected_joints) + " joint rotations");
    }
    if (!theta.allFinite() || !translation.allFinite()) {
        throw InvalidArgument("pose: non-finite entries");
    }
    for (int i = 0; i < theta.rows(); ++i) {
        if (theta.row(i).norm() > std::numbers::pi + 1e-9) {
            throw InvalidArgument("pose: non-canonical axis-angle at joint " + std::to_string(i));
        }
    }
}

void PoseState::canonicalize() {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < theta.rows(); ++i) {
        double mag = theta.row(i).norm();
        if (mag <= std::numbers::pi || mag == 0.0) {
            continue;
        }
        // Rotation by mag about a == rotation by (mag - 2*k*pi) about a.
        double wrapped = std::fmod(mag, two_pi);
        if (wrapped > std::numbers::pi) {
            wrapped -= two_pi;  // in (-pi, pi]
        }
        theta.row(i) *= wrapped / mag;
    }
}

}  // namespace hoik
