#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "hoik/errors.hpp"
#include "hoik/io.hpp"
#include "hoik/rotation.hpp"
#include "hoik/skeleton.hpp"
#include "oracles.hpp"

using namespace hoik;
constexpr double kPi = std::numbers::pi;

namespace {
KinematicTree two_joint_chain() {
    KinematicTree tree;
    tree.parents = {kRootParent, 0};
    tree.rest_template = {Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 1, 0)};
    return tree;
}
}  // namespace

TEST_CASE("zero pose reproduces the rest template") {
    const KinematicTree tree = load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
    const FkResult result = fk(tree, PoseState::zero(tree.joint_count()));
    for (int i = 0; i < tree.joint_count(); ++i) {
        CHECK((result.positions[i] - tree.rest_template[i]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("planar quarter turn at the root") {
    const KinematicTree tree = two_joint_chain();
    PoseState pose = PoseState::zero(2);
    pose.theta.row(0) = Eigen::RowVector3d(0, 0, kPi / 2.0);
    const FkResult result = fk(tree, pose);
    CHECK(result.positions[1].isApprox(Eigen::Vector3d(-1, 0, 0), 1e-12));
    CHECK(result.positions[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("global translation shifts every joint") {
    const KinematicTree tree = two_joint_chain();
    PoseState pose = PoseState::zero(2);
    pose.translation = {0.5, -0.25, 2.0};
    const FkResult result = fk(tree, pose);
    CHECK(result.positions[0].isApprox(Eigen::Vector3d(0.5, -0.25, 2.0), 1e-15));
    CHECK(result.positions[1].isApprox(Eigen::Vector3d(0.5, 0.75, 2.0), 1e-15));
}

TEST_CASE("fk matches the path-product oracle on random poses") {
    const KinematicTree tree = load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
    auto rng = oracle::seeded_rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const PoseState pose = oracle::random_pose(tree, rng);
        const FkResult ours = fk(tree, pose);
        const auto ref = oracle::fk_path_product(tree, pose);
        for (int i = 0; i < tree.joint_count(); ++i) {
            CHECK((ours.positions[i] - ref[i]).norm() <= 1e-9);
        }
    }
}

TEST_CASE("fk transforms stay rigid") {
    const KinematicTree tree = load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
    auto rng = oracle::seeded_rng(999);
    const PoseState pose = oracle::random_pose(tree, rng);
    for (const auto& t : fk(tree, pose).transforms) {
        CHECK(t.is_valid(1e-9));
        const Eigen::Matrix4d m = t.matrix();
        CHECK(m(3, 0) == 0.0);
        CHECK(m(3, 1) == 0.0);
        CHECK(m(3, 2) == 0.0);
        CHECK(m(3, 3) == 1.0);
    }
}

TEST_CASE("rigid transforms compose like their matrices") {
    auto rng = oracle::seeded_rng(321);
    RigidTransform a, b;
    a.rotation = axis_angle_to_matrix(oracle::random_unit(rng) * 0.9);
    a.translation = {0.2, -0.4, 1.0};
    b.rotation = axis_angle_to_matrix(oracle::random_unit(rng) * 1.7);
    b.translation = {-1.0, 0.3, 0.5};
    const Eigen::Matrix4d prod = (a * b).matrix();
    CHECK((prod - a.matrix() * b.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
    const Eigen::Vector3d p(0.3, 0.6, -0.2);
    CHECK(((a * b) * p - a * (b * p)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("invalid trees are rejected") {
    KinematicTree bad;
    bad.parents = {kRootParent, 2, 1};  // 1 <-> 2 cycle
    bad.rest_template = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX(),
                         Eigen::Vector3d::UnitY()};
    CHECK_THROWS_AS(bad.validate(), StructuralError);

    KinematicTree self;
    self.parents = {kRootParent, 1};
    self.rest_template = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX()};
    CHECK_THROWS_AS(self.validate(), StructuralError);

    KinematicTree sizes;
    sizes.parents = {kRootParent, 0};
    sizes.rest_template = {Eigen::Vector3d::Zero()};
    CHECK_THROWS_AS(fk(sizes, PoseState::zero(2)), StructuralError);
}

TEST_CASE("non-canonical poses are rejected") {
    const KinematicTree tree = two_joint_chain();
    PoseState pose = PoseState::zero(2);
    pose.theta.row(0) = Eigen::RowVector3d(2.5, 2.5, 0);  // magnitude > pi
    CHECK_THROWS_AS(fk(tree, pose), InvalidArgument);
    pose.theta.row(0).setZero();
    pose.translation.x() = std::nan("");
    CHECK_THROWS_AS(fk(tree, pose), InvalidArgument);
}

TEST_CASE("pose canonicalization wraps long rotations") {
    PoseState pose = PoseState::zero(1);
    pose.theta.row(0) = Eigen::RowVector3d(0, 0, 1.5 * kPi);
    pose.canonicalize();
    CHECK(pose.theta.row(0).norm() <= kPi + 1e-12);
    CHECK((axis_angle_to_matrix(pose.theta.row(0).transpose()) -
           axis_angle_to_matrix(Eigen::Vector3d(0, 0, 1.5 * kPi)))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
}

TEST_CASE("twist_direction basics") {
    const KinematicTree tree = two_joint_chain();
    std::vector<Eigen::Vector3d> positions = {Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 2, 0)};
    CHECK(twist_direction(positions, tree, 1).isApprox(Eigen::Vector3d(0, 1, 0), 1e-15));

    positions[1] = positions[0];
    CHECK_THROWS_AS(twist_direction(positions, tree, 1), DegenerateGeometry);
    CHECK_THROWS_AS(twist_direction(positions, tree, 0), InvalidArgument);
}

TEST_CASE("twist_direction equals difference-then-normalize") {
    const KinematicTree tree = load_skeleton(std::string(HOIK_DATA_DIR) + "/skeleton_smpl24.json");
    auto rng = oracle::seeded_rng(77);
    const PoseState pose = oracle::random_pose(tree, rng);
    const auto positions = fk(tree, pose).positions;
    for (int j = 1; j < tree.joint_count(); ++j) {
        const Eigen::Vector3d expect =
            (positions[j] - positions[tree.parents[j]]).normalized();
        CHECK((twist_direction(positions, tree, j) - expect).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
