#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hoik/camera.hpp"
#include "hoik/errors.hpp"
#include "hoik/rotation.hpp"
#include "oracles.hpp"

using namespace hoik;

namespace {

// Homogeneous-matrix projection oracle: K [R | t] in matrix form.
Eigen::Vector2d matrix_projection(const PinholeCamera& cam, const Eigen::Vector3d& p) {
    Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
    k(0, 0) = cam.fx;
    k(1, 1) = cam.fy;
    k(0, 2) = cam.cx;
    k(1, 2) = cam.cy;
    Eigen::Matrix<double, 3, 4> rt;
    rt.leftCols<3>() = cam.extrinsic.rotation;
    rt.col(3) = cam.extrinsic.translation;
    const Eigen::Vector3d h = k * (rt * p.homogeneous());
    return {h.x() / h.z(), h.y() / h.z()};
}

}  // namespace

TEST_CASE("on-axis and similar-triangle points") {
    PinholeCamera cam;
    cam.fx = cam.fy = 500.0;
    cam.cx = cam.cy = 0.0;
    CHECK(project_root_2d({0, 0, 2}, cam).cwiseAbs().maxCoeff() == 0.0);
    CHECK(project_root_2d({1, 0, 2}, cam).isApprox(Eigen::Vector2d(250, 0), 1e-15));
}

TEST_CASE("points behind the camera are rejected") {
    PinholeCamera cam;
    CHECK_THROWS_AS(cam.project({0, 0, -1}), ProjectionError);
    CHECK_THROWS_AS(cam.project({0, 0, 0}), ProjectionError);
    CHECK_THROWS_AS(cam.project({0, 0, 5e-7}), ProjectionError);
}

TEST_CASE("projection matches the homogeneous-matrix oracle") {
    auto rng = oracle::seeded_rng(31);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    PinholeCamera cam;
    cam.fx = 480.0;
    cam.fy = 520.0;
    cam.cx = 320.0;
    cam.cy = 240.0;
    cam.extrinsic.rotation = rodrigues(oracle::random_unit(rng), 0.4);
    cam.extrinsic.translation = {0.1, -0.2, 0.3};
    for (int i = 0; i < 300; ++i) {
        const Eigen::Vector3d p{2.0 * uni(rng), 2.0 * uni(rng), 3.0 + uni(rng)};
        if (cam.to_camera(p).z() <= 1e-6) {
            continue;
        }
        CHECK((cam.project(p) - matrix_projection(cam, p)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("grid projection: center, clamping, quarter resolution") {
    PinholeCamera cam;
    cam.fx = cam.fy = 100.0;
    cam.cx = 64.0;
    cam.cy = 48.0;
    const int gw = 32, gh = 24;  // quarter of a 128x96 image

    CHECK(project_to_grid({0, 0, 2}, cam, gw, gh) == Eigen::Vector2i(16, 12));

    // Far off-screen point clamps to the border cell.
    CHECK(project_to_grid({100, 100, 1}, cam, gw, gh) == Eigen::Vector2i(gw - 1, gh - 1));
    CHECK(project_to_grid({-100, -100, 1}, cam, gw, gh) == Eigen::Vector2i(0, 0));

    CHECK_THROWS_AS(project_to_grid({0, 0, -2}, cam, gw, gh), ProjectionError);
}

TEST_CASE("grid projection equals full-resolution projection over 4") {
    auto rng = oracle::seeded_rng(77);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);
    PinholeCamera cam;
    cam.fx = cam.fy = 200.0;
    cam.cx = 128.0;
    cam.cy = 128.0;
    const int gw = 64, gh = 64;
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector3d p{uni(rng), uni(rng), 1.5 + uni(rng)};
        const Eigen::Vector2d full = cam.project(p);
        const Eigen::Vector2i cell = project_to_grid(p, cam, gw, gh);
        const long eu = std::clamp(std::lround(full.x() / 4.0), 0L, static_cast<long>(gw - 1));
        const long ev = std::clamp(std::lround(full.y() / 4.0), 0L, static_cast<long>(gh - 1));
        CHECK(cell.x() == eu);
        CHECK(cell.y() == ev);
    }
}
