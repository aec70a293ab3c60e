#include "hoik/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "hoik/errors.hpp"

namespace hoik {

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {normal(rng), normal(rng), normal(rng)};
    } while (v.norm() < 1e-6);
    return v.normalized();
}

// Limb parts cycled across the suite (hands, forearms, upper arms, feet).
constexpr int kSuiteParts[] = {7, 8, 5, 6, 3, 4, 13, 14};

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

IKProblem make_synthetic_problem(const KinematicTree& tree, std::uint64_t seed) {
    tree.validate_full();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    IKProblem problem;
    problem.camera.fx = problem.camera.fy = 500.0;
    problem.camera.cx = problem.camera.cy = 0.0;

    const int part = kSuiteParts[seed % (sizeof(kSuiteParts) / sizeof(int))];
    problem.part_label = part;
    const ChainSpec chain = activate_chain(tree, part);
    const auto rot_joints = chain.rotation_joints();

    for (int attempt = 0; attempt < 256; ++attempt) {
        PoseState pose = PoseState::zero(tree.joint_count());
        for (int i = 0; i < tree.joint_count(); ++i) {
            pose.theta.row(i) = (random_unit(rng) * (0.25 * uni(rng))).transpose();
        }
        pose.translation = {0.4 * uni(rng) - 0.2, 0.4 * uni(rng) - 0.2, 2.2 + 0.6 * uni(rng)};

        TwistSwingParams truth = TwistSwingParams::zero(chain);
        for (auto& entry : truth.joints) {
            entry.twist_angle = (2.0 * uni(rng) - 1.0) * 8.0 * kDeg;
            entry.swing_angle = (2.0 * uni(rng) - 1.0) * 8.0 * kDeg;
            entry.swing_axis = random_unit(rng);
        }
        truth.delta_t = {0.03 * (2.0 * uni(rng) - 1.0), 0.03 * (2.0 * uni(rng) - 1.0),
                         0.03 * (2.0 * uni(rng) - 1.0)};

        const auto perturbed = improved_fk(tree, pose, truth, chain);
        const auto initial = fk(tree, pose);
        const double miss = (perturbed.target_position - initial.positions[chain.target_joint]).norm();
        if (miss < 0.02 || miss > 0.07) {
            continue;
        }

        const Eigen::Vector3d root_now = initial.positions[0];
        const Eigen::Vector3d root_truth = root_now + truth.delta_t;
        const Eigen::Vector2d px_now = problem.camera.project(root_now);
        const Eigen::Vector2d px_truth = problem.camera.project(root_truth);
        if ((px_truth - px_now).norm() > 4.0) {
            continue;
        }

        problem.initial_pose = pose;
        problem.target_points = {perturbed.target_position};
        problem.root_2d = px_truth;
        return problem;
    }
    throw StateError("make_synthetic_problem: no reachable instance found (seed " +
                     std::to_string(seed) + ")");
}

std::vector<BenchRow> run_suite(const KinematicTree& tree, const SuiteConfig& config) {
    if (config.problems < 1) {
        throw InvalidArgument("suite: at least one problem required");
    }
    if (config.gammas.empty() || config.solvers.empty()) {
        throw InvalidArgument("suite: gammas and solvers must be non-empty");
    }
    for (const auto& s : config.solvers) {
        if (s != "neural" && s != "trm") {
            throw InvalidArgument("suite: unknown solver '" + s + "'");
        }
    }

    std::vector<IKProblem> problems;
    problems.reserve(config.problems);
    for (int i = 0; i < config.problems; ++i) {
        problems.push_back(make_synthetic_problem(tree, config.seed + 0x9E3779B97F4A7C15ULL * i));
    }

    std::vector<BenchRow> rows;
    for (const auto& solver : config.solvers) {
        for (double gamma : config.gammas) {
            SolverConfig sc = config.base;
            sc.gamma = gamma;
            for (int i = 0; i < config.problems; ++i) {
                sc.seed = config.seed + static_cast<std::uint64_t>(i);
                const SolveResult res = solver == "neural" ? solve_ik(tree, problems[i], sc)
                                                           : solve_ik_trm(tree, problems[i], sc);
                BenchRow row;
                row.problem = i;
                row.solver = solver;
                row.gamma = gamma;
                row.stop_reason = res.stop_reason;
                row.iterations = res.iterations;
                row.initial_loss = res.initial_loss;
                row.final_loss = res.final_loss;
                row.mean_target_distance = res.mean_target_distance;
                row.off_target_rotation = res.off_target_rotation;
                row.max_abs_twist = res.max_abs_twist;
                row.max_abs_swing = res.max_abs_swing;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

bool is_converged(StopReason r) {
    return r == StopReason::converged || r == StopReason::already_converged;
}

}  // namespace

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "problem,solver,gamma_deg,stop_reason,converged,iterations,initial_loss,final_loss,"
           "mean_target_distance_m,off_target_rotation_rad,max_abs_twist_rad,max_abs_swing_rad\n";
    for (const auto& r : rows) {
        // %.12g hides the deg->rad->deg roundoff in the label column
        char gamma_deg[32];
        std::snprintf(gamma_deg, sizeof(gamma_deg), "%.12g", r.gamma / kDeg);
        out << r.problem << ',' << r.solver << ',' << gamma_deg << ','
            << to_string(r.stop_reason) << ',' << (is_converged(r.stop_reason) ? 1 : 0) << ','
            << r.iterations << ',' << fmt(r.initial_loss) << ',' << fmt(r.final_loss) << ','
            << fmt(r.mean_target_distance) << ',' << fmt(r.off_target_rotation) << ','
            << fmt(r.max_abs_twist) << ',' << fmt(r.max_abs_swing) << '\n';
    }
    return out.str();
}

std::string rows_to_markdown(const std::vector<BenchRow>& rows) {
    struct Agg {
        int count = 0, converged = 0;
        double iters = 0, final_loss = 0, off_rot = 0, dist = 0;
    };
    std::map<std::pair<std::string, double>, Agg> groups;
    for (const auto& r : rows) {
        Agg& a = groups[{r.solver, r.gamma}];
        ++a.count;
        if (is_converged(r.stop_reason)) {
            ++a.converged;
        }
        a.iters += r.iterations;
        a.final_loss += r.final_loss;
        a.off_rot += r.off_target_rotation;
        a.dist += r.mean_target_distance;
    }

    std::ostringstream out;
    out << "| solver | gamma (deg) | converged | mean iters | mean final loss | mean dist (m) | "
           "mean off-target rotation (rad) |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& [key, a] : groups) {
        out << "| " << key.first << " | " << fmt3(key.second / kDeg) << " | " << a.converged << "/"
            << a.count << " | " << fmt3(a.iters / a.count) << " | " << fmt(a.final_loss / a.count)
            << " | " << fmt(a.dist / a.count) << " | " << fmt3(a.off_rot / a.count) << " |\n";
    }

    // Pairwise gamma trend for the neural solver: fraction of problems whose
    // off-target rotation at the smallest gamma does not exceed the largest.
    std::vector<double> gammas;
    for (const auto& [key, a] : groups) {
        if (key.first == "neural") {
            gammas.push_back(key.second);
        }
    }
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
    if (gammas.size() >= 2) {
        const double lo = gammas.front(), hi = gammas.back();
        std::map<int, double> lo_rot, hi_rot;
        for (const auto& r : rows) {
            if (r.solver != "neural") {
                continue;
            }
            if (r.gamma == lo) {
                lo_rot[r.problem] = r.off_target_rotation;
            }
            if (r.gamma == hi) {
                hi_rot[r.problem] = r.off_target_rotation;
            }
        }
        int le = 0, total = 0;
        for (const auto& [p, v] : lo_rot) {
            auto it = hi_rot.find(p);
            if (it != hi_rot.end()) {
                ++total;
                if (v <= it->second) {
                    ++le;
                }
            }
        }
        if (total > 0) {
            // Monotonicity of the per-gamma means, annotated for the report.
            std::vector<double> means;
            for (double g : gammas) {
                const Agg& a = groups.at({"neural", g});
                means.push_back(a.off_rot / a.count);
            }
            const bool monotone = std::is_sorted(means.begin(), means.end());
            out << "\nneural off-target rotation: gamma " << fmt3(lo / kDeg) << " <= gamma "
                << fmt3(hi / kDeg) << " on " << le << "/" << total << " problems; per-gamma means "
                << (monotone ? "non-decreasing" : "not monotone") << " in gamma\n";
        }
    }
    return out.str();
}

}  // namespace hoik
