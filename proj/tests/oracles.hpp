#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// rotations via quaternion composition, forward kinematics via explicit 4x4
// path products, nearest neighbours and Chamfer via brute-force scans, and
// gradients via central finite differences.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hoik/fk.hpp"
#include "hoik/skeleton.hpp"

namespace oracle {

// Axis-angle -> rotation matrix through the unit quaternion.
inline Eigen::Matrix3d quaternion_rotation(const Eigen::Vector3d& axis, double angle) {
    const double h = 0.5 * angle;
    const double w = std::cos(h);
    const Eigen::Vector3d v = std::sin(h) * axis;
    Eigen::Matrix3d r;
    r << 1 - 2 * (v.y() * v.y() + v.z() * v.z()), 2 * (v.x() * v.y() - w * v.z()),
        2 * (v.x() * v.z() + w * v.y()),
        2 * (v.x() * v.y() + w * v.z()), 1 - 2 * (v.x() * v.x() + v.z() * v.z()),
        2 * (v.y() * v.z() - w * v.x()),
        2 * (v.x() * v.z() - w * v.y()), 2 * (v.y() * v.z() + w * v.x()),
        1 - 2 * (v.x() * v.x() + v.y() * v.y());
    return r;
}

inline Eigen::Matrix3d quaternion_rotation(const Eigen::Vector3d& theta) {
    const double angle = theta.norm();
    if (angle == 0.0) {
        return Eigen::Matrix3d::Identity();
    }
    return quaternion_rotation(theta / angle, angle);
}

inline Eigen::Matrix4d make_local(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = t;
    return m;
}

// Path-product FK: for every joint, multiply the full chain of local 4x4
// transforms from the root, rotations built via quaternions.
inline std::vector<Eigen::Vector3d> fk_path_product(const hoik::KinematicTree& tree,
                                                    const hoik::PoseState& pose) {
    const int n = tree.joint_count();
    std::vector<Eigen::Vector3d> positions(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> path;
        for (int j = i; j != hoik::kRootParent; j = tree.parents[j]) {
            path.push_back(j);
        }
        Eigen::Matrix4d acc = Eigen::Matrix4d::Identity();
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            const int j = *it;
            const Eigen::Vector3d offset =
                j == 0 ? tree.rest_template[0]
                       : Eigen::Vector3d(tree.rest_template[j] - tree.rest_template[tree.parents[j]]);
            acc = acc * make_local(quaternion_rotation(pose.theta.row(j).transpose()), offset);
        }
        positions[i] = acc.topRightCorner<3, 1>() + pose.translation;
    }
    return positions;
}

// Twist-swing FK rebuilt from scratch: full 4x4 products along the chain with
// quaternion rotations, world-frame axes conjugated into the local frame.
inline std::vector<Eigen::Vector3d> improved_fk_product(const hoik::KinematicTree& tree,
                                                        const hoik::PoseState& pose,
                                                        const hoik::TwistSwingParams& ts,
                                                        const hoik::ChainSpec& chain) {
    std::vector<Eigen::Vector3d> positions = fk_path_product(tree, pose);
    for (auto& p : positions) {
        p += ts.delta_t;
    }

    Eigen::Matrix4d acc = make_local(quaternion_rotation(pose.theta.row(0).transpose()),
                                     tree.rest_template[0]);
    size_t rot_idx = 0;
    for (size_t k = 1; k < chain.joints.size(); ++k) {
        const int j = chain.joints[k];
        const int parent = chain.joints[k - 1];
        const Eigen::Vector3d parent_pos = acc.topRightCorner<3, 1>();
        acc = acc * make_local(quaternion_rotation(pose.theta.row(j).transpose()),
                               tree.rest_template[j] - tree.rest_template[parent]);
        if (chain.type_of_joint[j] == hoik::JointType::rotation) {
            const auto& entry = ts.joints[rot_idx++];
            const Eigen::Matrix3d rot = acc.topLeftCorner<3, 3>();
            const Eigen::Vector3d bone = acc.topRightCorner<3, 1>() - parent_pos;
            const Eigen::Vector3d m_local = rot.transpose() * bone.normalized();
            const Eigen::Vector3d n_local = rot.transpose() * entry.swing_axis;
            const Eigen::Matrix3d delta = quaternion_rotation(m_local, entry.twist_angle) *
                                          quaternion_rotation(n_local, entry.swing_angle);
            acc = acc * make_local(delta, Eigen::Vector3d::Zero());
        }
        positions[j] = acc.topRightCorner<3, 1>() + pose.translation + ts.delta_t;
    }
    return positions;
}

// Brute-force nearest neighbour with the lowest-index tie rule.
inline std::pair<int, double> brute_nearest(const Eigen::Vector3d& q,
                                            const std::vector<Eigen::Vector3d>& pts) {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pts.size(); ++i) {
        const double d2 = (q - pts[i]).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    return {best, std::sqrt(best_d2)};
}

inline double brute_chamfer_cm(const std::vector<Eigen::Vector3d>& a,
                               const std::vector<Eigen::Vector3d>& b) {
    double ab = 0.0, ba = 0.0;
    for (const auto& p : a) {
        ab += brute_nearest(p, b).second;
    }
    for (const auto& p : b) {
        ba += brute_nearest(p, a).second;
    }
    return 100.0 * 0.5 * (ab / a.size() + ba / b.size());
}

// mujoco-style corrected relative error: absolute slack swallows roundoff.
inline double relative_error(double a, double b, double atol = 1e-9) {
    const double num = std::max(0.0, std::abs(a - b) - atol);
    return num / (std::abs(a) + std::abs(b) + atol);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {normal(rng), normal(rng), normal(rng)};
    } while (v.norm() < 1e-6);
    return v.normalized();
}

inline hoik::PoseState random_pose(const hoik::KinematicTree& tree, std::mt19937_64& rng,
                                   double max_angle = 3.1415) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    hoik::PoseState pose = hoik::PoseState::zero(tree.joint_count());
    for (int i = 0; i < tree.joint_count(); ++i) {
        pose.theta.row(i) = (random_unit(rng) * (max_angle * uni(rng))).transpose();
    }
    pose.translation = {2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0};
    return pose;
}

}  // namespace oracle
