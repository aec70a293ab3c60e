#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hoik/ik.hpp"
#include "hoik/skeleton.hpp"

namespace hoik {

// Synthetic reachable-target suite: each problem perturbs a random pose with
// twist-swing increments well inside gamma = 30 degrees, runs the improved
// forward kinematics to get the target, and keeps the instance only when the
// initial miss is 2..7 cm and the 2D root shift is at most 4 px. Those bounds
// make the relative stop rule imply a sub-centimeter final miss.
struct SuiteConfig {
    int problems = 100;
    std::uint64_t seed = 42;
    std::vector<double> gammas = {0.5235987755982988};  // radians
    std::vector<std::string> solvers = {"neural", "trm"};
    SolverConfig base;
};

IKProblem make_synthetic_problem(const KinematicTree& tree, std::uint64_t seed);

struct BenchRow {
    int problem = 0;
    std::string solver;
    double gamma = 0.0;
    StopReason stop_reason = StopReason::converged;
    int iterations = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double mean_target_distance = 0.0;
    double off_target_rotation = 0.0;
    double max_abs_twist = 0.0;
    double max_abs_swing = 0.0;
};

// Runs every solver at every gamma over the same problem set (problems are
// generated once from the suite seed).
std::vector<BenchRow> run_suite(const KinematicTree& tree, const SuiteConfig& config);

std::string rows_to_csv(const std::vector<BenchRow>& rows);

// Aggregate per (solver, gamma): convergence rate, mean iterations / loss /
// off-target rotation, plus a gamma-trend note for the neural solver.
std::string rows_to_markdown(const std::vector<BenchRow>& rows);

}  // namespace hoik
