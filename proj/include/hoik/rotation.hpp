#pragma once

#include <Eigen/Core>

namespace hoik {

// Skew-symmetric (cross-product) matrix of a 3-vector.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

// Rotation about a unit axis by `angle` radians:
//   R = I + sin(angle) [axis]x + (1 - cos(angle)) [axis]x^2
// The axis must be unit length within 1e-6.
Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis, double angle);

// Variant taking precomputed sin/cos of the angle (used where the angle is
// represented through its sine, e.g. tanh-saturated solver outputs).
Eigen::Matrix3d rodrigues_sincos(const Eigen::Vector3d& axis, double sin_a, double cos_a);

// Axis-angle 3-vector (radians * unit axis) to rotation matrix. The zero
// vector maps to the identity.
Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& theta);

// Rotation matrix back to a canonical axis-angle vector (magnitude <= pi).
Eigen::Vector3d matrix_to_axis_angle(const Eigen::Matrix3d& rot);

// True when R^T R = I and det R = 1 within `tol`.
bool is_rotation(const Eigen::Matrix3d& rot, double tol = 1e-9);

}  // namespace hoik
