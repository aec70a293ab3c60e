#pragma once

#include <vector>

#include <Eigen/Core>

#include "hoik/skeleton.hpp"

namespace hoik {

// Similarity transform y ~ scale * R * x + t.
struct SimilarityTransform {
    double scale = 1.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
        return scale * (rotation * p) + translation;
    }
};

struct MetricReport {
    double chamfer_cm = 0.0;
    double pa_chamfer_cm = 0.0;
    SimilarityTransform alignment;
};

// Symmetric Chamfer distance: mean of unsquared nearest-neighbour distances
// in both directions, halved, converted meters -> centimeters.
double chamfer(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b);

// Least-squares similarity (scale, rotation, translation) mapping source[i]
// onto target[i]; reflection corrected to a proper rotation. Needs >= 3
// non-collinear pairs.
SimilarityTransform procrustes_align(const std::vector<Eigen::Vector3d>& source,
                                     const std::vector<Eigen::Vector3d>& target);

// Chamfer after Procrustes alignment of the prediction onto the ground truth
// (vertex correspondence by index: same mesh topology).
double pa_chamfer(const std::vector<Eigen::Vector3d>& predicted,
                  const std::vector<Eigen::Vector3d>& truth);

MetricReport evaluate_meshes(const std::vector<Eigen::Vector3d>& predicted,
                             const std::vector<Eigen::Vector3d>& truth);

}  // namespace hoik
