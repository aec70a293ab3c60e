#include "hoik/fk.hpp"

#include <cmath>
#include <unordered_set>

#include "hoik/errors.hpp"
#include "hoik/rotation.hpp"

namespace hoik {

std::vector<int> ChainSpec::rotation_joints() const {
    std::vector<int> out;
    for (int j : joints) {
        if (type_of_joint[j] == JointType::rotation) {
            out.push_back(j);
        }
    }
    return out;
}

void ChainSpec::validate(const KinematicTree& tree) const {
    const int n = tree.joint_count();
    if (static_cast<int>(type_of_joint.size()) != n) {
        throw ConfigurationError("chain spec: type table size mismatch");
    }
    if (joints.empty() || joints.front() != 0) {
        throw ConfigurationError("chain spec: chain must start at the root");
    }
    std::unordered_set<int> on_chain(joints.begin(), joints.end());
    if (on_chain.find(target_joint) == on_chain.end()) {
        throw ConfigurationError("chain spec: target joint is not on the active chain");
    }
    int target_count = 0;
    for (int j = 0; j < n; ++j) {
        const JointType t = type_of_joint[j];
        if (t == JointType::target) {
            ++target_count;
            if (j != target_joint) {
                throw ConfigurationError("chain spec: target type on a non-target joint");
            }
        }
        if (t == JointType::translation && j != 0) {
            throw ConfigurationError("chain spec: translation type off the root");
        }
        if (on_chain.count(j) == 0 && t != JointType::fixed) {
            throw ConfigurationError("chain spec: off-chain joint must be fixed");
        }
    }
    if (target_count != 1) {
        throw ConfigurationError("chain spec: exactly one target joint required");
    }
}

TwistSwingParams TwistSwingParams::zero(const ChainSpec& spec) {
    TwistSwingParams ts;
    for (int j : spec.rotation_joints()) {
        JointTwistSwing entry;
        entry.joint = j;
        ts.joints.push_back(entry);
    }
    return ts;
}

void TwistSwingParams::validate(double gamma) const {
    for (const auto& j : joints) {
        if (!std::isfinite(j.twist_angle) || !std::isfinite(j.swing_angle)) {
            throw InvalidArgument("twist-swing: non-finite angle");
        }
        if (std::abs(j.twist_angle) > gamma + 1e-12 || std::abs(j.swing_angle) > gamma + 1e-12) {
            throw InvalidArgument("twist-swing: angle outside [-gamma, gamma]");
        }
        if (std::abs(j.swing_axis.norm() - 1.0) > 1e-9) {
            throw InvalidArgument("twist-swing: swing axis is not unit length");
        }
    }
    if (!delta_t.allFinite()) {
        throw InvalidArgument("twist-swing: non-finite delta_t");
    }
}

FkResult fk(const KinematicTree& tree, const PoseState& pose) {
    tree.validate();
    pose.validate(tree.joint_count());

    const int n = tree.joint_count();
    FkResult result;
    result.transforms.resize(n);
    result.positions.resize(n);

    for (int i : tree.topological_order()) {
        RigidTransform local;
        local.rotation = axis_angle_to_matrix(pose.theta.row(i).transpose());
        if (i == 0) {
            local.translation = tree.rest_template[0];
            result.transforms[0] = local;
        } else {
            local.translation = tree.rest_template[i] - tree.rest_template[tree.parents[i]];
            result.transforms[i] = result.transforms[tree.parents[i]] * local;
        }
        result.positions[i] = result.transforms[i].translation + pose.translation;
    }
    return result;
}

Eigen::Vector3d twist_direction(const std::vector<Eigen::Vector3d>& joint_positions,
                                const KinematicTree& tree, int joint) {
    if (joint <= 0 || joint >= tree.joint_count()) {
        throw InvalidArgument("twist_direction: joint must be a non-root joint");
    }
    const Eigen::Vector3d bone = joint_positions[joint] - joint_positions[tree.parents[joint]];
    const double len = bone.norm();
    if (len <= 1e-8) {
        throw DegenerateGeometry("twist_direction: degenerate bone at joint " + std::to_string(joint));
    }
    return bone / len;
}

ImprovedFkResult improved_fk(const KinematicTree& tree, const PoseState& pose,
                             const TwistSwingParams& ts, const ChainSpec& active) {
    active.validate(tree);
    const auto rot_joints = active.rotation_joints();
    if (ts.joints.size() != rot_joints.size()) {
        throw ConfigurationError("improved_fk: twist-swing entries do not match chain rotation joints");
    }
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        if (ts.joints[k].joint != rot_joints[k]) {
            throw ConfigurationError("improved_fk: twist-swing joint order mismatch");
        }
    }

    const FkResult plain = fk(tree, pose);
    const int n = tree.joint_count();

    ImprovedFkResult result;
    result.positions.resize(n);
    for (int i = 0; i < n; ++i) {
        result.positions[i] = plain.positions[i] + ts.delta_t;
    }
    result.local_delta_r.assign(rot_joints.size(), Eigen::Matrix3d::Identity());

    // Walk the chain recomposing transforms; off-chain joints keep plain FK.
    RigidTransform current;  // transform of the previous chain joint
    size_t rot_idx = 0;
    for (size_t k = 0; k < active.joints.size(); ++k) {
        const int j = active.joints[k];
        if (k == 0) {
            current = plain.transforms[0];
        } else {
            const int parent = active.joints[k - 1];
            RigidTransform local;
            local.rotation = axis_angle_to_matrix(pose.theta.row(j).transpose());
            local.translation = tree.rest_template[j] - tree.rest_template[parent];

            const Eigen::Vector3d parent_pos = current.translation;
            RigidTransform pre = current * local;

            if (active.type_of_joint[j] == JointType::rotation) {
                const auto& entry = ts.joints[rot_idx];
                const Eigen::Vector3d bone = pre.translation - parent_pos;
                const double len = bone.norm();
                if (len <= 1e-8) {
                    throw DegenerateGeometry("improved_fk: degenerate bone at joint " + std::to_string(j));
                }
                const double axis_norm = entry.swing_axis.norm();
                if (std::abs(axis_norm - 1.0) > 1e-9) {
                    throw InvalidArgument("improved_fk: swing axis is not unit length");
                }
                // World-frame axes conjugated into the joint's local frame so
                // the twist really is about the bone through this joint.
                const Eigen::Vector3d m_local = pre.rotation.transpose() * (bone / len);
                const Eigen::Vector3d n_local = pre.rotation.transpose() * entry.swing_axis;
                const Eigen::Matrix3d r_tw = rodrigues(m_local, entry.twist_angle);
                const Eigen::Matrix3d r_sw = rodrigues(n_local, entry.swing_angle);
                result.local_delta_r[rot_idx] = r_tw * r_sw;
                pre.rotation = pre.rotation * result.local_delta_r[rot_idx];
                ++rot_idx;
            }
            current = pre;
        }
        result.positions[j] = current.translation + pose.translation + ts.delta_t;
    }

    result.target_position = result.positions[active.target_joint];
    return result;
}

}  // namespace hoik
