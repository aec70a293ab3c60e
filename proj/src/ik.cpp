#include "hoik/ik.hpp"

#include <cmath>
#include <numbers>

#include "hoik/errors.hpp"
#include "hoik/rotation.hpp"
#include "ik_graph.hpp"

namespace hoik {

void IKProblem::validate(const KinematicTree& tree) const {
    initial_pose.validate(tree.joint_count());
    if (target_points.empty()) {
        throw InvalidArgument("ik problem: empty target point set");
    }
    for (const auto& p : target_points) {
        if (!p.allFinite()) {
            throw InvalidArgument("ik problem: non-finite target point");
        }
    }
    if (!root_2d.allFinite()) {
        throw InvalidArgument("ik problem: non-finite 2D root keypoint");
    }
}

Eigen::Vector3d IKProblem::target_centroid() const {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto& p : target_points) {
        c += p;
    }
    return c / static_cast<double>(target_points.size());
}

void SolverConfig::validate() const {
    if (!(gamma > 0.0) || gamma > std::numbers::pi / 2.0 + 1e-12) {
        throw InvalidArgument("config: gamma must be in (0, 90] degrees");
    }
    if (!(stop_factor > 0.0 && stop_factor < 1.0)) {
        throw InvalidArgument("config: stop factor must be in (0, 1)");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("config: max iterations must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw InvalidArgument("config: learning rate must be positive");
    }
    if (eps1 < 0.0 || eps2 < 0.0) {
        throw InvalidArgument("config: loss weights must be non-negative");
    }
    if (hidden_sizes.empty()) {
        throw InvalidArgument("config: at least one hidden layer required");
    }
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return "converged";
        case StopReason::already_converged: return "already_converged";
        case StopReason::max_iters_reached: return "max_iters_reached";
        case StopReason::stalled: return "stalled";
    }
    return "unknown";
}

ChainSpec activate_chain(const KinematicTree& tree, int part_label) {
    tree.validate_full();
    if (part_label == kNoContactLabel) {
        throw InvalidArgument("activate_chain: label 15 is no-contact, not a drivable target");
    }
    if (part_label < 1 || part_label > kBodyPartCount) {
        throw InvalidArgument("activate_chain: part label out of range");
    }

    // Most distal chain joint carrying the part wins; ties go to the first
    // chain in file order.
    int best_chain = -1, best_joint = -1, best_depth = -1;
    for (size_t c = 0; c < tree.chains.size(); ++c) {
        const auto& joints = tree.chains[c].joints;
        for (int k = static_cast<int>(joints.size()) - 1; k >= 0; --k) {
            if (tree.part_of_joint[joints[k]] == part_label) {
                if (k > best_depth) {
                    best_depth = k;
                    best_chain = static_cast<int>(c);
                    best_joint = joints[k];
                }
                break;
            }
        }
    }
    if (best_chain < 0) {
        throw ConfigurationError("activate_chain: no chain contains part " + std::to_string(part_label));
    }

    ChainSpec spec;
    spec.chain_index = best_chain;
    const auto& full = tree.chains[best_chain].joints;
    spec.joints.assign(full.begin(), full.begin() + best_depth + 1);
    spec.target_joint = best_joint;
    spec.type_of_joint.assign(tree.joint_count(), JointType::fixed);
    for (int j : spec.joints) {
        spec.type_of_joint[j] = JointType::rotation;
    }
    spec.type_of_joint[0] = JointType::translation;
    spec.type_of_joint[best_joint] = JointType::target;
    spec.validate(tree);
    return spec;
}

double loss_ik(const Eigen::Vector3d& target_joint_pos,
               const std::vector<Eigen::Vector3d>& target_points,
               const Eigen::Vector2d& root_2d, const Eigen::Vector2d& observed_root_2d,
               double eps1, double eps2) {
    if (target_points.empty()) {
        throw InvalidArgument("loss_ik: empty target point set");
    }
    if (!target_joint_pos.allFinite() || !root_2d.allFinite() || !observed_root_2d.allFinite()) {
        throw InvalidArgument("loss_ik: non-finite inputs");
    }
    double acc = 0.0;
    for (const auto& p : target_points) {
        if (!p.allFinite()) {
            throw InvalidArgument("loss_ik: non-finite target point");
        }
        acc += (target_joint_pos - p).squaredNorm();
    }
    const double mean_sq = acc / static_cast<double>(target_points.size());
    return eps1 * mean_sq + eps2 * (root_2d - observed_root_2d).squaredNorm();
}

TwistSwingParams decode_twist_swing(const Eigen::VectorXd& raw, const KinematicTree& tree,
                                    const ChainSpec& chain, double gamma) {
    const auto rot_joints = chain.rotation_joints();
    if (raw.size() != detail::raw_output_dim(chain)) {
        throw InvalidArgument("decode_twist_swing: raw vector size mismatch");
    }
    const double sin_gamma = std::sin(gamma);
    TwistSwingParams ts;
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        const int base = 5 * static_cast<int>(k);
        JointTwistSwing entry;
        entry.joint = rot_joints[k];
        const double sin_phi = sin_gamma * std::tanh(raw[base]);
        const double sin_alpha = sin_gamma * std::tanh(raw[base + 1]);
        entry.twist_angle = std::asin(sin_phi);
        entry.swing_angle = std::asin(sin_alpha);
        Eigen::Vector3d axis = raw.segment<3>(base + 2);
        const double len = axis.norm();
        if (len < 1e-8) {
            entry.swing_axis = detail::rest_bone_direction(tree, rot_joints[k]);
        } else {
            entry.swing_axis = axis / len;
        }
        ts.joints.push_back(entry);
    }
    ts.delta_t = raw.tail<3>();
    return ts;
}

namespace {

// Solver input: flattened theta rows, global translation, target centroid.
Eigen::VectorXd problem_input(const KinematicTree& tree, const IKProblem& problem) {
    Eigen::VectorXd input(3 * tree.joint_count() + 6);
    for (int i = 0; i < tree.joint_count(); ++i) {
        input.segment<3>(3 * i) = problem.initial_pose.theta.row(i).transpose();
    }
    input.segment<3>(3 * tree.joint_count()) = problem.initial_pose.translation;
    input.tail<3>() = problem.target_centroid();
    return input;
}

}  // namespace

TwistSwingParams mlp_forward(const MLPParams& params, const KinematicTree& tree,
                             const ChainSpec& chain, const IKProblem& problem,
                             const SolverConfig& config) {
    return decode_twist_swing(mlp_eval(params, problem_input(tree, problem)), tree, chain,
                              config.gamma);
}

double ik_loss(const KinematicTree& tree, const IKProblem& problem, const SolverConfig& config,
               const MLPParams& params) {
    problem.validate(tree);
    const ChainSpec chain = activate_chain(tree, problem.part_label);
    const TwistSwingParams ts = mlp_forward(params, tree, chain, problem, config);
    const auto improved = improved_fk(tree, problem.initial_pose, ts, chain);
    const Eigen::Vector3d root = improved.positions[0];
    const Eigen::Vector2d root_2d = project_root_2d(root, problem.camera);
    return loss_ik(improved.target_position, problem.target_points, root_2d, problem.root_2d,
                   config.eps1, config.eps2);
}

LossGradients ik_loss_gradients(const KinematicTree& tree, const IKProblem& problem,
                                const SolverConfig& config, const MLPParams& params) {
    problem.validate(tree);
    params.validate();
    const ChainSpec chain = activate_chain(tree, problem.part_label);

    Tape tape;
    const auto x = tape.constant(problem_input(tree, problem));
    std::vector<Tape::NodeId> weight_ids, bias_ids;
    Tape::NodeId h = x;
    for (int l = 0; l < params.layer_count(); ++l) {
        weight_ids.push_back(tape.leaf(params.weights[l]));
        bias_ids.push_back(tape.leaf(params.biases[l]));
        h = tape.add(tape.matmul(weight_ids[l], h), bias_ids[l]);
        if (l + 1 < params.layer_count()) {
            h = tape.tanh(h);
        }
    }
    const auto decoded = detail::build_decode(tape, h, tree, chain, config.gamma);
    const auto chain_nodes = detail::build_chain_fk(tape, tree, problem.initial_pose, chain, decoded);
    const auto loss_nodes = detail::build_loss(tape, chain_nodes, problem, config);

    tape.backward(loss_nodes.loss);
    LossGradients out;
    out.loss = tape.scalar_value(loss_nodes.loss);
    for (int l = 0; l < params.layer_count(); ++l) {
        out.weight_grads.push_back(tape.adjoint(weight_ids[l]));
        out.bias_grads.push_back(tape.adjoint(bias_ids[l]).col(0));
    }
    return out;
}

namespace {

// Adam with bias correction; state owned here, parameters live on the tape.
class AdamState {
public:
    AdamState(double lr) : lr_(lr) {}

    void register_param(Eigen::Index rows, Eigen::Index cols) {
        m_.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
        v_.emplace_back(Eigen::MatrixXd::Zero(rows, cols));
    }

    void step(std::vector<Eigen::MatrixXd*> params, const std::vector<const Eigen::MatrixXd*>& grads) {
        ++t_;
        const double corr1 = 1.0 - std::pow(beta1_, t_);
        const double corr2 = 1.0 - std::pow(beta2_, t_);
        for (size_t i = 0; i < params.size(); ++i) {
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * (*grads[i]);
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i]->cwiseProduct(*grads[i]);
            params[i]->array() -=
                lr_ * (m_[i].array() / corr1) / ((v_[i].array() / corr2).sqrt() + 1e-8);
        }
    }

private:
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999;
    int t_ = 0;
    std::vector<Eigen::MatrixXd> m_, v_;
};

}  // namespace

SolveResult solve_ik(const KinematicTree& tree, const IKProblem& problem,
                     const SolverConfig& config) {
    config.validate();
    problem.validate(tree);
    const ChainSpec chain = activate_chain(tree, problem.part_label);
    const auto rot_joints = chain.rotation_joints();
    const int out_dim = detail::raw_output_dim(chain);
    const int in_dim = 3 * tree.joint_count() + 6;

    MLPParams mlp = mlp_init(in_dim, config.hidden_sizes, out_dim, config.seed);
    // Seed the head bias axis slots with rest-pose bone directions so the
    // initial decode is smooth (axes already unit) while all angles stay 0.
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        mlp.biases.back().segment<3>(5 * static_cast<int>(k) + 2) =
            detail::rest_bone_direction(tree, rot_joints[k]);
    }

    Tape tape;
    const auto x = tape.constant(problem_input(tree, problem));
    std::vector<Tape::NodeId> weight_ids, bias_ids;
    Tape::NodeId h = x;
    for (int l = 0; l < mlp.layer_count(); ++l) {
        weight_ids.push_back(tape.leaf(mlp.weights[l]));
        bias_ids.push_back(tape.leaf(mlp.biases[l]));
        h = tape.add(tape.matmul(weight_ids[l], h), bias_ids[l]);
        if (l + 1 < mlp.layer_count()) {
            h = tape.tanh(h);
        }
    }
    const auto decoded = detail::build_decode(tape, h, tree, chain, config.gamma);
    const auto chain_nodes = detail::build_chain_fk(tape, tree, problem.initial_pose, chain, decoded);
    const auto loss_nodes = detail::build_loss(tape, chain_nodes, problem, config);

    SolveResult result;
    detail::track_angle_extrema(tape, decoded, result);
    result.initial_loss = tape.scalar_value(loss_nodes.loss);
    result.final_loss = result.initial_loss;

    if (result.initial_loss < 1e-10) {
        result.stop_reason = StopReason::already_converged;
        result.params = detail::read_twist_swing(tape, decoded, chain);
        detail::finalize_result(tree, problem, chain, result);
        return result;
    }

    AdamState adam(config.learning_rate);
    std::vector<Eigen::MatrixXd*> param_refs;
    std::vector<const Eigen::MatrixXd*> grad_refs;
    for (int l = 0; l < mlp.layer_count(); ++l) {
        adam.register_param(mlp.weights[l].rows(), mlp.weights[l].cols());
        adam.register_param(mlp.biases[l].size(), 1);
    }

    const double threshold = config.stop_factor * result.initial_loss;
    result.stop_reason = StopReason::max_iters_reached;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        tape.backward(loss_nodes.loss);

        param_refs.clear();
        grad_refs.clear();
        for (int l = 0; l < mlp.layer_count(); ++l) {
            param_refs.push_back(&tape.leaf_value(weight_ids[l]));
            grad_refs.push_back(&tape.adjoint(weight_ids[l]));
            param_refs.push_back(&tape.leaf_value(bias_ids[l]));
            grad_refs.push_back(&tape.adjoint(bias_ids[l]));
        }
        adam.step(param_refs, grad_refs);

        tape.forward();
        if (tape.scalar_value(loss_nodes.depth) <= 1e-6) {
            throw ProjectionError("solve_ik: root joint moved behind the camera");
        }
        detail::track_angle_extrema(tape, decoded, result);
        const double loss = tape.scalar_value(loss_nodes.loss);
        result.loss_history.push_back(loss);
        result.iterations = iter;
        if (loss < threshold) {
            result.stop_reason = StopReason::converged;
            break;
        }
    }

    result.final_loss = result.loss_history.empty() ? result.initial_loss : result.loss_history.back();
    result.params = detail::read_twist_swing(tape, decoded, chain);
    detail::finalize_result(tree, problem, chain, result);
    return result;
}

}  // namespace hoik
