#pragma once

#include <Eigen/Core>

#include "hoik/skeleton.hpp"

namespace hoik {

// Pinhole camera: world -> camera via the extrinsic transform, then
// (fx x / z + cx, fy y / z + cy).
struct PinholeCamera {
    double fx = 500.0, fy = 500.0;
    double cx = 0.0, cy = 0.0;
    RigidTransform extrinsic;  // world -> camera

    Eigen::Vector3d to_camera(const Eigen::Vector3d& p) const { return extrinsic * p; }

    // Throws ProjectionError when the point's camera-space depth <= 1e-6.
    Eigen::Vector2d project(const Eigen::Vector3d& p) const;
};

// 2D pixel position of the root joint; same pinhole model.
Eigen::Vector2d project_root_2d(const Eigen::Vector3d& root_position, const PinholeCamera& camera);

// Quarter-resolution grid cell of a projected point: pixel / 4, rounded to
// the nearest cell, clamped to [0, grid_w) x [0, grid_h).
Eigen::Vector2i project_to_grid(const Eigen::Vector3d& point, const PinholeCamera& camera,
                                int grid_w, int grid_h);

}  // namespace hoik
