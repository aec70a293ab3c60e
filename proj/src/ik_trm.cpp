#include <cmath>

#include <Eigen/Dense>

#include "hoik/errors.hpp"
#include "hoik/ik.hpp"
#include "ik_graph.hpp"

namespace hoik {

namespace {

// Dogleg step within the trust radius. J is m x n (m residuals), possibly
// rank-deficient; the Gauss-Newton step is the minimum-norm least-squares
// solution.
Eigen::VectorXd dogleg_step(const Eigen::MatrixXd& jac, const Eigen::VectorXd& residual,
                            const Eigen::VectorXd& gradient, double radius) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    const Eigen::VectorXd gn = cod.solve(-residual);
    if (gn.norm() <= radius) {
        return gn;
    }

    const Eigen::VectorXd jg = jac * gradient;
    const double g_bg = jg.squaredNorm();
    const double g_sq = gradient.squaredNorm();
    if (g_bg <= 0.0 || g_sq <= 0.0) {
        return gradient.norm() > 0.0 ? Eigen::VectorXd(-(radius / gradient.norm()) * gradient)
                                     : Eigen::VectorXd::Zero(gradient.size());
    }
    const Eigen::VectorXd cauchy = -(g_sq / g_bg) * gradient;
    const double cauchy_norm = cauchy.norm();
    if (cauchy_norm >= radius) {
        return (radius / cauchy_norm) * cauchy;
    }

    // Intersect the cauchy->gn segment with the radius sphere.
    const Eigen::VectorXd d = gn - cauchy;
    const double a = d.squaredNorm();
    const double b = 2.0 * cauchy.dot(d);
    const double c = cauchy.squaredNorm() - radius * radius;
    const double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double tau = a > 0.0 ? (-b + std::sqrt(disc)) / (2.0 * a) : 0.0;
    return cauchy + std::clamp(tau, 0.0, 1.0) * d;
}

}  // namespace

SolveResult solve_ik_trm(const KinematicTree& tree, const IKProblem& problem,
                         const SolverConfig& config) {
    config.validate();
    problem.validate(tree);
    const ChainSpec chain = activate_chain(tree, problem.part_label);
    const auto rot_joints = chain.rotation_joints();
    const int dim = detail::raw_output_dim(chain);

    // Direct variables: same layout as the network head, zero angles and
    // rest-pose bone axes to start.
    Eigen::VectorXd vars = Eigen::VectorXd::Zero(dim);
    for (size_t k = 0; k < rot_joints.size(); ++k) {
        vars.segment<3>(5 * static_cast<int>(k) + 2) = detail::rest_bone_direction(tree, rot_joints[k]);
    }

    Tape tape;
    const auto vars_leaf = tape.leaf(vars);
    const auto decoded = detail::build_decode(tape, vars_leaf, tree, chain, config.gamma);
    const auto chain_nodes = detail::build_chain_fk(tape, tree, problem.initial_pose, chain, decoded);
    const auto res = detail::build_residuals(tape, chain_nodes, problem, config);
    const int n_res = static_cast<int>(res.components.size());

    SolveResult result;
    detail::track_angle_extrema(tape, decoded, result);
    result.initial_loss = tape.scalar_value(res.loss);
    result.final_loss = result.initial_loss;

    if (result.initial_loss < 1e-10) {
        result.stop_reason = StopReason::already_converged;
        result.params = detail::read_twist_swing(tape, decoded, chain);
        detail::finalize_result(tree, problem, chain, result);
        return result;
    }

    const double threshold = config.stop_factor * result.initial_loss;
    double radius = 1.0;
    double current_loss = result.initial_loss;
    Eigen::VectorXd current = vars;

    result.stop_reason = StopReason::max_iters_reached;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        Eigen::MatrixXd jac(n_res, dim);
        Eigen::VectorXd residual(n_res);
        for (int c = 0; c < n_res; ++c) {
            residual(c) = tape.scalar_value(res.components[c]);
            tape.backward(res.components[c]);
            jac.row(c) = tape.adjoint(vars_leaf).col(0).transpose();
        }
        const Eigen::VectorXd gradient = jac.transpose() * residual;

        const Eigen::VectorXd step = dogleg_step(jac, residual, gradient, radius);
        // Reduction predicted by the quadratic model of ||r + J p||^2.
        const double predicted = -(2.0 * gradient.dot(step) + (jac * step).squaredNorm());

        const Eigen::VectorXd trial = current + step;
        tape.set_leaf(vars_leaf, trial);
        tape.forward();
        if (tape.scalar_value(res.depth) <= 1e-6) {
            throw ProjectionError("solve_ik_trm: root joint moved behind the camera");
        }
        const double trial_loss = tape.scalar_value(res.loss);

        const double rho = predicted > 0.0 ? (current_loss - trial_loss) / predicted : -1.0;
        if (rho > 1e-4) {
            current = trial;
            current_loss = trial_loss;
            detail::track_angle_extrema(tape, decoded, result);
        } else {
            tape.set_leaf(vars_leaf, current);
            tape.forward();
        }
        if (rho < 0.25) {
            radius *= 0.25;
        } else if (rho > 0.75 && step.norm() >= 0.99 * radius) {
            radius = std::min(2.0 * radius, 1e3);
        }

        result.loss_history.push_back(current_loss);
        result.iterations = iter;
        if (current_loss < threshold) {
            result.stop_reason = StopReason::converged;
            break;
        }
        if (radius < 1e-14) {
            result.stop_reason = StopReason::stalled;
            break;
        }
    }

    result.final_loss = current_loss;
    result.params = detail::read_twist_swing(tape, decoded, chain);
    detail::finalize_result(tree, problem, chain, result);
    return result;
}

}  // namespace hoik
