#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hoik/errors.hpp"
#include "hoik/ik.hpp"
#include "hoik/io.hpp"
#include "hoik/mlp.hpp"
#include "oracles.hpp"

using namespace hoik;
constexpr double kPi = std::numbers::pi;

namespace {
KinematicTree skeleton() {
    return load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
}
}  // namespace

TEST_CASE("init shapes, zero head, seeded determinism") {
    const MLPParams a = mlp_init(78, {256, 256}, 33, 7);
    a.validate();
    CHECK(a.input_dim() == 78);
    CHECK(a.output_dim() == 33);
    CHECK(a.weights.back().cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.weights.front().cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(78.0));

    const MLPParams b = mlp_init(78, {256, 256}, 33, 7);
    CHECK(a.weights[0] == b.weights[0]);
    const MLPParams c = mlp_init(78, {256, 256}, 33, 8);
    CHECK(a.weights[0] != c.weights[0]);
}

TEST_CASE("eval validates shapes") {
    const MLPParams params = mlp_init(4, {8}, 2, 1);
    CHECK_THROWS_AS(mlp_eval(params, Eigen::VectorXd::Zero(5)), InvalidArgument);
    CHECK(mlp_eval(params, Eigen::VectorXd::Zero(4)).size() == 2);
}

TEST_CASE("tanh saturation keeps angles inside gamma") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 7);
    const double gamma = kPi / 6.0;
    const int dim = 5 * static_cast<int>(chain.rotation_joints().size()) + 3;

    SUBCASE("zero raw output gives zero angles") {
        const TwistSwingParams ts = decode_twist_swing(Eigen::VectorXd::Zero(dim), tree, chain, gamma);
        for (const auto& j : ts.joints) {
            CHECK(j.twist_angle == 0.0);
            CHECK(j.swing_angle == 0.0);
            // zero raw axis falls back to the rest bone direction
            CHECK(std::abs(j.swing_axis.norm() - 1.0) <= 1e-12);
        }
        CHECK(ts.delta_t.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("huge raw outputs saturate at gamma") {
        Eigen::VectorXd raw = Eigen::VectorXd::Constant(dim, 1e9);
        const TwistSwingParams ts = decode_twist_swing(raw, tree, chain, gamma);
        for (const auto& j : ts.joints) {
            CHECK(std::abs(j.twist_angle) <= gamma + 1e-12);
            CHECK(std::abs(j.swing_angle) <= gamma + 1e-12);
            CHECK(j.twist_angle == doctest::Approx(gamma).epsilon(1e-9));
        }
    }

    SUBCASE("random parameters satisfy the twist-swing invariants") {
        auto rng = oracle::seeded_rng(11);
        std::uniform_real_distribution<double> uni(-5.0, 5.0);
        for (int trial = 0; trial < 200; ++trial) {
            Eigen::VectorXd raw(dim);
            for (int i = 0; i < dim; ++i) {
                raw[i] = uni(rng);
            }
            const TwistSwingParams ts = decode_twist_swing(raw, tree, chain, gamma);
            ts.validate(gamma);
            for (const auto& j : ts.joints) {
                const double s = std::sin(j.twist_angle);
                const double c = std::cos(j.twist_angle);
                CHECK(std::abs(s * s + c * c - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("mlp_forward at init produces the identity increment") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 8);
    SolverConfig config;
    IKProblem problem;
    problem.initial_pose = PoseState::zero(tree.joint_count());
    problem.part_label = 8;
    problem.target_points = {Eigen::Vector3d(0.3, 0.2, 1.0)};

    const int dim = 5 * static_cast<int>(chain.rotation_joints().size()) + 3;
    const MLPParams params = mlp_init(3 * tree.joint_count() + 6, config.hidden_sizes, dim, 3);
    const TwistSwingParams ts = mlp_forward(params, tree, chain, problem, config);
    for (const auto& j : ts.joints) {
        CHECK(j.twist_angle == 0.0);
        CHECK(j.swing_angle == 0.0);
    }
    CHECK(ts.delta_t.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("activate_chain maps parts to chains and targets") {
    const KinematicTree tree = skeleton();

    const ChainSpec left_hand = activate_chain(tree, 7);
    CHECK(tree.chains[left_hand.chain_index].name == "left_arm");
    CHECK(left_hand.target_joint == 20);  // left wrist
    CHECK(left_hand.joints.back() == 20);

    const ChainSpec right_foot = activate_chain(tree, 14);
    CHECK(tree.chains[right_foot.chain_index].name == "right_leg");
    CHECK(right_foot.target_joint == 8);  // right ankle

    const ChainSpec left_forearm = activate_chain(tree, 5);
    CHECK(left_forearm.target_joint == 18);  // elbow; chain truncated there
    CHECK(left_forearm.joints.back() == 18);
    CHECK(left_forearm.type_of_joint[20] == JointType::fixed);

    const ChainSpec torso = activate_chain(tree, 2);
    CHECK(tree.chains[torso.chain_index].name == "body");
    CHECK(torso.target_joint == 12);  // neck is the most distal torso joint

    CHECK(activate_chain(tree, 1).target_joint == 15);  // head

    CHECK_THROWS_AS(activate_chain(tree, 15), InvalidArgument);
    CHECK_THROWS_AS(activate_chain(tree, 0), InvalidArgument);
    CHECK_THROWS_AS(activate_chain(tree, 16), InvalidArgument);
}

TEST_CASE("every chain spec marks the root as translation") {
    const KinematicTree tree = skeleton();
    for (int part = 1; part <= 14; ++part) {
        const ChainSpec spec = activate_chain(tree, part);
        if (spec.target_joint != 0) {
            CHECK(spec.type_of_joint[0] == JointType::translation);
        }
        spec.validate(tree);
    }
}
