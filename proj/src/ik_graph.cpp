#include "ik_graph.hpp"

#include <cmath>

#include "hoik/errors.hpp"
#include "hoik/rotation.hpp"

namespace hoik::detail {

Eigen::Vector3d rest_bone_direction(const KinematicTree& tree, int joint) {
    if (joint <= 0 || joint >= tree.joint_count()) {
        throw InvalidArgument("rest_bone_direction: non-root joint required");
    }
    const Eigen::Vector3d bone = tree.rest_template[joint] - tree.rest_template[tree.parents[joint]];
    const double len = bone.norm();
    if (len <= 1e-8) {
        throw DegenerateGeometry("rest_bone_direction: degenerate template bone at joint " +
                                 std::to_string(joint));
    }
    return bone / len;
}

namespace {

// R = I + sin K + (1 - cos) K^2 with K = skew(axis).
NodeId rodrigues_on_tape(Tape& tape, NodeId axis, NodeId sin_a, NodeId cos_a,
                         NodeId identity3, NodeId one) {
    const auto k = tape.skew(axis);
    const auto k2 = tape.matmul(k, k);
    const auto term1 = tape.scalar_mul(sin_a, k);
    const auto term2 = tape.scalar_mul(tape.sub(one, cos_a), k2);
    return tape.add(tape.add(identity3, term1), term2);
}

}  // namespace

DecodedNodes build_decode(Tape& tape, NodeId y, const KinematicTree& tree,
                          const ChainSpec& chain, double gamma) {
    const auto rot_joints = chain.rotation_joints();
    const double sin_gamma = std::sin(gamma);
    const auto one = tape.constant(1.0);

    DecodedNodes d;
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        const int base = 5 * static_cast<int>(k);
        const auto s_phi = tape.scale_const(tape.tanh(tape.slice_rows(y, base, 1)), sin_gamma);
        const auto c_phi = tape.sqrt(tape.sub(one, tape.mul(s_phi, s_phi)));
        const auto s_alpha = tape.scale_const(tape.tanh(tape.slice_rows(y, base + 1, 1)), sin_gamma);
        const auto c_alpha = tape.sqrt(tape.sub(one, tape.mul(s_alpha, s_alpha)));
        const auto axis = tape.normalize_or(tape.slice_rows(y, base + 2, 3),
                                            rest_bone_direction(tree, rot_joints[k]));
        d.sin_phi.push_back(s_phi);
        d.cos_phi.push_back(c_phi);
        d.sin_alpha.push_back(s_alpha);
        d.cos_alpha.push_back(c_alpha);
        d.axis.push_back(axis);
    }
    d.delta_t = tape.slice_rows(y, 5 * static_cast<int>(rot_joints.size()), 3);
    return d;
}

ChainNodes build_chain_fk(Tape& tape, const KinematicTree& tree, const PoseState& pose,
                          const ChainSpec& chain, const DecodedNodes& decoded) {
    chain.validate(tree);
    const auto identity3 = tape.constant(Eigen::MatrixXd(Eigen::Matrix3d::Identity()));
    const auto one = tape.constant(1.0);

    NodeId cur_r = tape.constant(Eigen::MatrixXd(axis_angle_to_matrix(pose.theta.row(0).transpose())));
    NodeId cur_p = tape.constant(Eigen::MatrixXd(tree.rest_template[0]));
    NodeId target_p = cur_p;

    size_t rot_idx = 0;
    for (size_t k = 1; k < chain.joints.size(); ++k) {
        const int j = chain.joints[k];
        const int parent = chain.joints[k - 1];
        const Eigen::Vector3d t_local = tree.rest_template[j] - tree.rest_template[parent];
        if (t_local.norm() <= 1e-8) {
            throw DegenerateGeometry("chain fk: degenerate template bone at joint " + std::to_string(j));
        }

        const NodeId pre_p = tape.add(cur_p, tape.matmul(cur_r, tape.constant(Eigen::MatrixXd(t_local))));
        NodeId pre_r = tape.matmul(
            cur_r, tape.constant(Eigen::MatrixXd(axis_angle_to_matrix(pose.theta.row(j).transpose()))));

        if (chain.type_of_joint[j] == JointType::rotation) {
            // Twist about the current bone, swing about the predicted axis;
            // both world directions are mapped into this joint's local frame.
            const auto bone = tape.sub(pre_p, cur_p);
            const auto m_world = tape.normalize(bone);
            const auto pre_r_t = tape.transpose(pre_r);
            const auto m_local = tape.matmul(pre_r_t, m_world);
            const auto n_local = tape.matmul(pre_r_t, decoded.axis[rot_idx]);
            const auto r_tw = rodrigues_on_tape(tape, m_local, decoded.sin_phi[rot_idx],
                                                decoded.cos_phi[rot_idx], identity3, one);
            const auto r_sw = rodrigues_on_tape(tape, n_local, decoded.sin_alpha[rot_idx],
                                                decoded.cos_alpha[rot_idx], identity3, one);
            pre_r = tape.matmul(pre_r, tape.matmul(r_tw, r_sw));
            ++rot_idx;
        }
        cur_r = pre_r;
        cur_p = pre_p;
        if (j == chain.target_joint) {
            target_p = cur_p;
        }
    }

    const auto t_hat = tape.constant(Eigen::MatrixXd(pose.translation));
    ChainNodes out;
    out.target_pos = tape.add(tape.add(target_p, t_hat), decoded.delta_t);
    out.root_pos = tape.add(tape.add(tape.constant(Eigen::MatrixXd(tree.rest_template[0])), t_hat),
                            decoded.delta_t);
    return out;
}

namespace {

struct Projection2d {
    NodeId du, dv, depth;
};

Projection2d build_projection(Tape& tape, NodeId root_pos, const IKProblem& problem) {
    const auto& cam = problem.camera;
    const auto r_ext = tape.constant(Eigen::MatrixXd(cam.extrinsic.rotation));
    const auto t_ext = tape.constant(Eigen::MatrixXd(cam.extrinsic.translation));
    const auto in_cam = tape.add(tape.matmul(r_ext, root_pos), t_ext);
    const auto xs = tape.slice_rows(in_cam, 0, 1);
    const auto ys = tape.slice_rows(in_cam, 1, 1);
    const auto zs = tape.slice_rows(in_cam, 2, 1);
    const auto u = tape.add(tape.scale_const(tape.div(xs, zs), cam.fx), tape.constant(cam.cx));
    const auto v = tape.add(tape.scale_const(tape.div(ys, zs), cam.fy), tape.constant(cam.cy));
    Projection2d out;
    out.du = tape.sub(u, tape.constant(problem.root_2d.x()));
    out.dv = tape.sub(v, tape.constant(problem.root_2d.y()));
    out.depth = zs;
    return out;
}

}  // namespace

LossNodes build_loss(Tape& tape, const ChainNodes& chain_nodes, const IKProblem& problem,
                     const SolverConfig& config) {
    const int n = static_cast<int>(problem.target_points.size());
    NodeId acc = -1;
    for (const auto& p : problem.target_points) {
        const auto diff = tape.sub(chain_nodes.target_pos, tape.constant(Eigen::MatrixXd(p)));
        const auto sq = tape.squared_norm(diff);
        acc = acc < 0 ? sq : tape.add(acc, sq);
    }
    const auto loss3 = tape.scale_const(acc, config.eps1 / n);

    const auto proj = build_projection(tape, chain_nodes.root_pos, problem);
    const auto sq2d = tape.add(tape.mul(proj.du, proj.du), tape.mul(proj.dv, proj.dv));
    const auto loss2 = tape.scale_const(sq2d, config.eps2);

    LossNodes out;
    out.loss = tape.add(loss3, loss2);
    out.depth = proj.depth;
    return out;
}

ResidualNodes build_residuals(Tape& tape, const ChainNodes& chain_nodes, const IKProblem& problem,
                              const SolverConfig& config) {
    const int n = static_cast<int>(problem.target_points.size());
    const Eigen::Vector3d centroid = problem.target_centroid();
    double spread = 0.0;
    for (const auto& p : problem.target_points) {
        spread += (p - centroid).squaredNorm();
    }
    spread /= n;

    const auto r3 = tape.scale_const(
        tape.sub(chain_nodes.target_pos, tape.constant(Eigen::MatrixXd(centroid))),
        std::sqrt(config.eps1));
    const auto proj = build_projection(tape, chain_nodes.root_pos, problem);
    const double s2 = std::sqrt(config.eps2);
    const auto ru = tape.scale_const(proj.du, s2);
    const auto rv = tape.scale_const(proj.dv, s2);

    ResidualNodes out;
    out.components = {tape.slice_rows(r3, 0, 1), tape.slice_rows(r3, 1, 1),
                      tape.slice_rows(r3, 2, 1), ru, rv};
    const auto reducible = tape.add(tape.squared_norm(r3),
                                    tape.add(tape.mul(ru, ru), tape.mul(rv, rv)));
    out.loss = tape.add(reducible, tape.constant(config.eps1 * spread));
    out.depth = proj.depth;
    return out;
}

TwistSwingParams read_twist_swing(const Tape& tape, const DecodedNodes& decoded,
                                  const ChainSpec& chain) {
    const auto rot_joints = chain.rotation_joints();
    TwistSwingParams ts;
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        JointTwistSwing entry;
        entry.joint = rot_joints[k];
        entry.twist_angle = std::asin(tape.scalar_value(decoded.sin_phi[k]));
        entry.swing_angle = std::asin(tape.scalar_value(decoded.sin_alpha[k]));
        entry.swing_axis = tape.value(decoded.axis[k]).col(0);
        ts.joints.push_back(entry);
    }
    ts.delta_t = tape.value(decoded.delta_t).col(0);
    return ts;
}

void track_angle_extrema(const Tape& tape, const DecodedNodes& decoded, SolveResult& result) {
    for (size_t k = 0; k < decoded.sin_phi.size(); ++k) {
        result.max_abs_twist = std::max(result.max_abs_twist,
                                        std::abs(std::asin(tape.scalar_value(decoded.sin_phi[k]))));
        result.max_abs_swing = std::max(result.max_abs_swing,
                                        std::abs(std::asin(tape.scalar_value(decoded.sin_alpha[k]))));
    }
}

void finalize_result(const KinematicTree& tree, const IKProblem& problem, const ChainSpec& chain,
                     SolveResult& result) {
    const auto improved = improved_fk(tree, problem.initial_pose, result.params, chain);
    result.target_position = improved.target_position;

    double acc = 0.0;
    for (const auto& p : problem.target_points) {
        acc += (result.target_position - p).norm();
    }
    result.mean_target_distance = acc / static_cast<double>(problem.target_points.size());

    result.off_target_rotation = 0.0;
    for (const auto& entry : result.params.joints) {
        result.off_target_rotation += std::abs(entry.twist_angle) + std::abs(entry.swing_angle);
    }

    result.final_pose = problem.initial_pose;
    const auto rot_joints = chain.rotation_joints();
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        const int j = rot_joints[k];
        const Eigen::Matrix3d baked =
            axis_angle_to_matrix(result.final_pose.theta.row(j).transpose()) *
            improved.local_delta_r[k];
        result.final_pose.theta.row(j) = matrix_to_axis_angle(baked).transpose();
    }
    result.final_pose.translation = problem.initial_pose.translation + result.params.delta_t;
}

}  // namespace hoik::detail
