#include "hoik/camera.hpp"

#include <algorithm>
#include <cmath>

#include "hoik/errors.hpp"

namespace hoik {

Eigen::Vector2d PinholeCamera::project(const Eigen::Vector3d& p) const {
    const Eigen::Vector3d c = to_camera(p);
    if (c.z() <= 1e-6) {
        throw ProjectionError("project: point at or behind the camera plane");
    }
    return {fx * c.x() / c.z() + cx, fy * c.y() / c.z() + cy};
}

Eigen::Vector2d project_root_2d(const Eigen::Vector3d& root_position, const PinholeCamera& camera) {
    return camera.project(root_position);
}

Eigen::Vector2i project_to_grid(const Eigen::Vector3d& point, const PinholeCamera& camera,
                                int grid_w, int grid_h) {
    if (grid_w < 1 || grid_h < 1) {
        throw InvalidArgument("project_to_grid: empty grid");
    }
    const Eigen::Vector2d px = camera.project(point);
    const long u = std::lround(px.x() / 4.0);
    const long v = std::lround(px.y() / 4.0);
    return {static_cast<int>(std::clamp(u, 0L, static_cast<long>(grid_w - 1))),
            static_cast<int>(std::clamp(v, 0L, static_cast<long>(grid_h - 1)))};
}

}  // namespace hoik
