#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "hoik/errors.hpp"
#include "hoik/ik.hpp"
#include "hoik/io.hpp"
#include "oracles.hpp"

using namespace hoik;
constexpr double kPi = std::numbers::pi;

namespace {

KinematicTree skeleton() {
    return load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
}

TwistSwingParams random_params(const ChainSpec& chain, std::mt19937_64& rng, double gamma) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    TwistSwingParams ts = TwistSwingParams::zero(chain);
    for (auto& entry : ts.joints) {
        entry.twist_angle = gamma * uni(rng);
        entry.swing_angle = gamma * uni(rng);
        entry.swing_axis = oracle::random_unit(rng);
    }
    ts.delta_t = {0.05 * uni(rng), 0.05 * uni(rng), 0.05 * uni(rng)};
    return ts;
}

}  // namespace

TEST_CASE("zero twist-swing equals plain fk") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 7);  // left hand -> left arm chain
    auto rng = oracle::seeded_rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const PoseState pose = oracle::random_pose(tree, rng);
        const auto plain = fk(tree, pose);
        const auto improved = improved_fk(tree, pose, TwistSwingParams::zero(chain), chain);
        for (int i = 0; i < tree.joint_count(); ++i) {
            CHECK((improved.positions[i] - plain.positions[i]).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("twist alone leaves colinear descendants fixed") {
    // Straight chain along +y; twisting any joint must not move joints on the
    // same line.
    KinematicTree tree;
    tree.parents = {kRootParent, 0, 1, 2};
    tree.rest_template = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 1, 0),
                          Eigen::Vector3d(0, 2, 0), Eigen::Vector3d(0, 3, 0)};
    ChainSpec chain;
    chain.joints = {0, 1, 2, 3};
    chain.target_joint = 3;
    chain.type_of_joint = {JointType::translation, JointType::rotation, JointType::rotation,
                           JointType::target};

    PoseState pose = PoseState::zero(4);
    TwistSwingParams ts = TwistSwingParams::zero(chain);
    ts.joints[0].twist_angle = 0.4;
    ts.joints[1].twist_angle = -0.7;

    const auto plain = fk(tree, pose);
    const auto improved = improved_fk(tree, pose, ts, chain);
    for (int i = 0; i < 4; ++i) {
        CHECK((improved.positions[i] - plain.positions[i]).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("improved_fk matches the from-scratch product oracle") {
    const KinematicTree tree = skeleton();
    auto rng = oracle::seeded_rng(314);
    for (int part : {7, 8, 5, 13, 2}) {
        const ChainSpec chain = activate_chain(tree, part);
        for (int trial = 0; trial < 40; ++trial) {
            const PoseState pose = oracle::random_pose(tree, rng, 1.5);
            const TwistSwingParams ts = random_params(chain, rng, kPi / 6.0);
            const auto ours = improved_fk(tree, pose, ts, chain);
            const auto ref = oracle::improved_fk_product(tree, pose, ts, chain);
            for (int i = 0; i < tree.joint_count(); ++i) {
                CHECK((ours.positions[i] - ref[i]).norm() <= 1e-9);
            }
            CHECK((ours.target_position - ref[chain.target_joint]).norm() <= 1e-9);
        }
    }
}

TEST_CASE("fixed joints move only by delta_t") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 7);
    auto rng = oracle::seeded_rng(99);
    const PoseState pose = oracle::random_pose(tree, rng, 1.0);
    const TwistSwingParams ts = random_params(chain, rng, kPi / 6.0);
    const auto plain = fk(tree, pose);
    const auto improved = improved_fk(tree, pose, ts, chain);
    for (int i = 0; i < tree.joint_count(); ++i) {
        if (chain.type_of_joint[i] == JointType::fixed) {
            CHECK((improved.positions[i] - (plain.positions[i] + ts.delta_t))
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("target joint position includes both translations") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 7);
    PoseState pose = PoseState::zero(tree.joint_count());
    pose.translation = {1.0, 2.0, 3.0};
    TwistSwingParams ts = TwistSwingParams::zero(chain);
    ts.delta_t = {0.1, -0.2, 0.3};
    const auto improved = improved_fk(tree, pose, ts, chain);
    const Eigen::Vector3d expect =
        tree.rest_template[chain.target_joint] + pose.translation + ts.delta_t;
    CHECK((improved.target_position - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("parameter validation") {
    const KinematicTree tree = skeleton();
    const ChainSpec chain = activate_chain(tree, 7);
    const double gamma = kPi / 6.0;
    auto rng = oracle::seeded_rng(1);

    TwistSwingParams ok = random_params(chain, rng, gamma);
    ok.validate(gamma);

    TwistSwingParams over = ok;
    over.joints[0].twist_angle = gamma + 0.1;
    CHECK_THROWS_AS(over.validate(gamma), InvalidArgument);

    TwistSwingParams bad_axis = ok;
    bad_axis.joints[0].swing_axis = {1.0, 1.0, 0.0};
    CHECK_THROWS_AS(bad_axis.validate(gamma), InvalidArgument);
    CHECK_THROWS_AS(improved_fk(tree, PoseState::zero(24), bad_axis, chain), InvalidArgument);

    // Entry order must follow the chain's rotation joints.
    TwistSwingParams swapped = ok;
    std::swap(swapped.joints[0], swapped.joints[1]);
    CHECK_THROWS_AS(improved_fk(tree, PoseState::zero(24), swapped, chain), ConfigurationError);
}

TEST_CASE("chain spec validation") {
    const KinematicTree tree = skeleton();
    ChainSpec spec = activate_chain(tree, 7);

    ChainSpec off_target = spec;
    off_target.target_joint = 11;  // not on the chain
    CHECK_THROWS_AS(off_target.validate(tree), ConfigurationError);

    ChainSpec two_targets = spec;
    two_targets.type_of_joint[16] = JointType::target;
    CHECK_THROWS_AS(two_targets.validate(tree), ConfigurationError);

    ChainSpec stray_translation = spec;
    stray_translation.type_of_joint[16] = JointType::translation;
    CHECK_THROWS_AS(stray_translation.validate(tree), ConfigurationError);

    ChainSpec loose = spec;
    loose.type_of_joint[11] = JointType::rotation;  // off-chain joint not fixed
    CHECK_THROWS_AS(loose.validate(tree), ConfigurationError);
}
