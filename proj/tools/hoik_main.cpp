// hoik: skeleton kinematics, online neural IK, contact labelling and mesh
// metrics on synthetic or user-supplied scenes.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hoik/bench.hpp"
#include "hoik/contact.hpp"
#include "hoik/errors.hpp"
#include "hoik/io.hpp"
#include "hoik/metrics.hpp"

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string default_skeleton(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("HOIK_SKELETON")) {
        return env;
    }
    return "";
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw hoik::ParseError("cannot write " + path);
    }
    out << text;
}

nlohmann::json result_to_json(const hoik::SolveResult& res) {
    nlohmann::json j;
    j["stop_reason"] = hoik::to_string(res.stop_reason);
    j["iterations"] = res.iterations;
    j["initial_loss"] = res.initial_loss;
    j["final_loss"] = res.final_loss;
    j["mean_target_distance_m"] = res.mean_target_distance;
    j["off_target_rotation_rad"] = res.off_target_rotation;
    j["max_abs_twist_rad"] = res.max_abs_twist;
    j["max_abs_swing_rad"] = res.max_abs_swing;
    j["target_position"] = {res.target_position.x(), res.target_position.y(),
                            res.target_position.z()};
    j["final_pose"] = hoik::pose_to_json(res.final_pose);
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& entry : res.params.joints) {
        ts.push_back({{"joint", entry.joint},
                      {"twist_angle", entry.twist_angle},
                      {"swing_angle", entry.swing_angle},
                      {"swing_axis",
                       {entry.swing_axis.x(), entry.swing_axis.y(), entry.swing_axis.z()}}});
    }
    j["twist_swing"] = ts;
    j["delta_t"] = {res.params.delta_t.x(), res.params.delta_t.y(), res.params.delta_t.z()};
    j["loss_history"] = res.loss_history;
    return j;
}

std::string result_to_csv(const hoik::SolveResult& res) {
    std::ostringstream out;
    out << "iteration,loss\n";
    out << "0," << res.initial_loss << '\n';
    for (size_t i = 0; i < res.loss_history.size(); ++i) {
        out << (i + 1) << ',' << res.loss_history[i] << '\n';
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"human-object interaction kinematics toolkit"};
    app.require_subcommand(1);

    std::string skeleton_path, scene_path, pose_path, out_path;
    std::string format = "json";

    // fk
    auto* cmd_fk = app.add_subcommand("fk", "forward kinematics: joint positions for a pose");
    cmd_fk->add_option("--skeleton", skeleton_path, "skeleton JSON (or HOIK_SKELETON)");
    cmd_fk->add_option("--pose", pose_path, "pose JSON")->required();
    cmd_fk->add_option("--out", out_path, "output path (default stdout)");

    // contact
    double threshold = hoik::kContactThreshold;
    std::string labels_format = "json";
    auto* cmd_contact = app.add_subcommand("contact", "contact-region pseudo-labels for a scene");
    cmd_contact->add_option("--scene", scene_path, "scene JSON")->required();
    cmd_contact->add_option("--threshold", threshold, "contact distance threshold, meters");
    cmd_contact->add_option("--out", out_path, "output path")->required();
    cmd_contact->add_option("--format", labels_format, "json|bin")
        ->check(CLI::IsMember({"json", "bin"}));

    // ik
    std::string solver = "neural";
    double gamma_deg = 30.0;
    hoik::SolverConfig ik_config;
    auto* cmd_ik = app.add_subcommand("ik", "drive the contact joint to the target region");
    cmd_ik->add_option("--skeleton", skeleton_path, "skeleton JSON (or HOIK_SKELETON)");
    cmd_ik->add_option("--scene", scene_path, "scene JSON")->required();
    cmd_ik->add_option("--solver", solver, "neural|trm")->check(CLI::IsMember({"neural", "trm"}));
    cmd_ik->add_option("--gamma", gamma_deg, "twist/swing bound, degrees");
    cmd_ik->add_option("--eps1", ik_config.eps1, "3D loss weight");
    cmd_ik->add_option("--eps2", ik_config.eps2, "2D root loss weight");
    cmd_ik->add_option("--lr", ik_config.learning_rate, "learning rate");
    cmd_ik->add_option("--max-iters", ik_config.max_iterations, "iteration budget");
    cmd_ik->add_option("--seed", ik_config.seed, "RNG seed");
    cmd_ik->add_option("--out", out_path, "report path (default stdout)");
    cmd_ik->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    // eval
    std::string pred_path, truth_path, seq_id;
    int frame = 0;
    auto* cmd_eval = app.add_subcommand("eval", "Chamfer / PA-Chamfer between two meshes");
    cmd_eval->add_option("predicted", pred_path, "predicted mesh (.obj/.pts/.json)")->required();
    cmd_eval->add_option("truth", truth_path, "ground-truth mesh")->required();
    cmd_eval->add_option("--seq", seq_id, "sequence id recorded in the report row");
    cmd_eval->add_option("--frame", frame, "frame number recorded in the report row");
    cmd_eval->add_option("--out", out_path, "output path (default stdout)");
    cmd_eval->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    // bench
    std::string suite_path, out_md;
    hoik::SuiteConfig suite;
    std::vector<double> gammas_deg;
    std::vector<std::string> solvers;
    int problems = -1;
    std::uint64_t bench_seed = 0;
    auto* cmd_bench = app.add_subcommand("bench", "synthetic suite across solvers and gamma values");
    cmd_bench->add_option("--skeleton", skeleton_path, "skeleton JSON (or HOIK_SKELETON)");
    cmd_bench->add_option("--suite", suite_path, "suite config JSON");
    cmd_bench->add_option("--problems", problems, "number of synthetic problems");
    cmd_bench->add_option("--gamma", gammas_deg, "gamma values, degrees (repeatable)");
    cmd_bench->add_option("--solver", solvers, "solvers to run (repeatable)");
    cmd_bench->add_option("--seed", bench_seed, "suite seed");
    cmd_bench->add_option("--lr", suite.base.learning_rate, "learning rate");
    cmd_bench->add_option("--max-iters", suite.base.max_iterations, "iteration budget");
    cmd_bench->add_option("--out", out_path, "CSV output path")->required();
    cmd_bench->add_option("--out-md", out_md, "markdown summary path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_fk) {
            const std::string sk = default_skeleton(skeleton_path);
            if (sk.empty()) {
                throw hoik::ParseError("fk: --skeleton or HOIK_SKELETON required");
            }
            const hoik::KinematicTree tree = hoik::load_skeleton(sk);
            const hoik::PoseState pose = hoik::load_pose(pose_path, tree.joint_count());
            const hoik::FkResult result = hoik::fk(tree, pose);
            nlohmann::json j;
            j["positions"] = hoik::points_to_json(result.positions);
            write_text(out_path, j.dump(2) + "\n");
        } else if (*cmd_contact) {
            const hoik::Scene scene = hoik::load_scene(scene_path);
            if (!scene.human_mesh) {
                throw hoik::ParseError("contact: scene is missing 'human_mesh'");
            }
            if (scene.object_points.empty()) {
                throw hoik::ParseError("contact: scene is missing 'object_points'");
            }
            const hoik::LabeledPointCloud labels =
                hoik::contact_labels(scene.object_points, *scene.human_mesh, threshold);
            if (labels_format == "bin") {
                hoik::save_labels_binary(out_path, labels);
            } else {
                hoik::save_labels_json(out_path, labels);
            }
        } else if (*cmd_ik) {
            const hoik::Scene scene = hoik::load_scene(scene_path, default_skeleton(skeleton_path));
            if (!scene.has_skeleton) {
                throw hoik::ParseError("ik: skeleton required (scene field, --skeleton or HOIK_SKELETON)");
            }
            hoik::IKProblem problem = hoik::scene_to_ik_problem(scene);
            ik_config.gamma = gamma_deg * kDeg;
            const hoik::SolveResult res = solver == "trm"
                                              ? hoik::solve_ik_trm(scene.skeleton, problem, ik_config)
                                              : hoik::solve_ik(scene.skeleton, problem, ik_config);
            if (format == "csv") {
                write_text(out_path, result_to_csv(res));
            } else {
                write_text(out_path, result_to_json(res).dump(2) + "\n");
            }
            return res.stop_reason == hoik::StopReason::converged ||
                           res.stop_reason == hoik::StopReason::already_converged
                       ? 0
                       : 2;
        } else if (*cmd_eval) {
            const auto predicted = hoik::load_points(pred_path);
            const auto truth = hoik::load_points(truth_path);
            const hoik::MetricReport report = hoik::evaluate_meshes(predicted, truth);
            if (format == "csv") {
                std::ostringstream out;
                out << "seq,frame,chamfer_cm,pa_chamfer_cm\n"
                    << seq_id << ',' << frame << ',' << report.chamfer_cm << ','
                    << report.pa_chamfer_cm << '\n';
                write_text(out_path, out.str());
            } else {
                nlohmann::json j;
                j["seq"] = seq_id;
                j["frame"] = frame;
                j["chamfer_cm"] = report.chamfer_cm;
                j["pa_chamfer_cm"] = report.pa_chamfer_cm;
                j["alignment"] = {{"scale", report.alignment.scale}};
                write_text(out_path, j.dump(2) + "\n");
            }
        } else if (*cmd_bench) {
            if (!suite_path.empty()) {
                std::ifstream in(suite_path);
                if (!in) {
                    throw hoik::ParseError("cannot open " + suite_path);
                }
                nlohmann::json j = nlohmann::json::parse(in);
                if (j.contains("problems")) suite.problems = j["problems"].get<int>();
                if (j.contains("seed")) suite.seed = j["seed"].get<std::uint64_t>();
                if (j.contains("gammas_deg")) {
                    suite.gammas.clear();
                    for (const auto& g : j["gammas_deg"]) suite.gammas.push_back(g.get<double>() * kDeg);
                }
                if (j.contains("solvers")) {
                    suite.solvers = j["solvers"].get<std::vector<std::string>>();
                }
                if (j.contains("max_iters")) suite.base.max_iterations = j["max_iters"].get<int>();
                if (j.contains("lr")) suite.base.learning_rate = j["lr"].get<double>();
                if (j.contains("skeleton") && skeleton_path.empty()) {
                    skeleton_path = j["skeleton"].get<std::string>();
                }
            }
            // CLI flags override the suite file.
            if (problems >= 0) suite.problems = problems;
            if (cmd_bench->count("--seed") > 0) suite.seed = bench_seed;
            if (!gammas_deg.empty()) {
                suite.gammas.clear();
                for (double g : gammas_deg) suite.gammas.push_back(g * kDeg);
            }
            if (!solvers.empty()) suite.solvers = solvers;

            const std::string sk = default_skeleton(skeleton_path);
            if (sk.empty()) {
                throw hoik::ParseError("bench: --skeleton or HOIK_SKELETON required");
            }
            const hoik::KinematicTree tree = hoik::load_skeleton(sk);
            const auto rows = hoik::run_suite(tree, suite);
            write_text(out_path, hoik::rows_to_csv(rows));
            if (!out_md.empty()) {
                write_text(out_md, hoik::rows_to_markdown(rows));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
