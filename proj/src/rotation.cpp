#include "hoik/rotation.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "hoik/errors.hpp"

namespace hoik {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle) {
    if (!axis.allFinite() || !std::isfinite(angle)) {
        throw InvalidArgument("rodrigues: non-finite axis or angle");
    }
    if (std::abs(axis.norm() - 1.0) > 1e-6) {
        throw InvalidArgument("rodrigues: axis is not unit length");
    }
    return rodrigues_sincos(axis, std::sin(angle), std::cos(angle));
}

Eigen::Matrix3d rodrigues_sincos(const Eigen::Vector3d& axis, double sin_a, double cos_a) {
    const Eigen::Matrix3d k = skew(axis);
    return Eigen::Matrix3d::Identity() + sin_a * k + (1.0 - cos_a) * (k * k);
}

Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& theta) {
    if (!theta.allFinite()) {
        throw InvalidArgument("axis_angle_to_matrix: non-finite input");
    }
    const double angle = theta.norm();
    if (angle == 0.0) {
        return Eigen::Matrix3d::Identity();
    }
    return rodrigues(theta / angle, angle);
}

Eigen::Vector3d matrix_to_axis_angle(const Eigen::Matrix3d& rot) {
    const Eigen::AngleAxisd aa(rot);
    return aa.angle() * aa.axis();
}

bool is_rotation(const Eigen::Matrix3d& rot, double tol) {
    const double ortho = (rot.transpose() * rot - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(rot.determinant() - 1.0) <= tol;
}

}  // namespace hoik
