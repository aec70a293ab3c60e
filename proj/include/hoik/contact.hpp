#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "hoik/camera.hpp"
#include "hoik/kdtree.hpp"

namespace hoik {

// Human mesh vertices with one body-part label (1..14) per vertex.
struct PartLabeledMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<int> parts;

    void validate() const;
};

// Object points with a 15-way contact class per point (15 = no-contact).
struct LabeledPointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<int> labels;  // 1..15 class indices

    std::array<double, 15> one_hot(int i) const;
};

inline constexpr double kContactThreshold = 0.04;  // meters

// Distance to the nearest mesh vertex and its index (lowest index on ties).
// Exactly equal to a brute-force scan.
KdTree::Hit nearest_distance(const Eigen::Vector3d& point, const PartLabeledMesh& mesh);

// Pseudo-labels: nearest vertex's part when d < threshold (strict), else
// no-contact (15).
LabeledPointCloud contact_labels(const std::vector<Eigen::Vector3d>& object_points,
                                 const PartLabeledMesh& mesh,
                                 double threshold = kContactThreshold);

// Dense H x W x C scalar grid at quarter image resolution.
struct FeatureGrid {
    int height = 0, width = 0, channels = 0;
    std::vector<double> data;  // (h, w, c) row-major

    static FeatureGrid zeros(int height, int width, int channels);
    double& at(int h, int w, int c);
    double at(int h, int w, int c) const;
    void validate() const;
};

// Mean of the k x k neighbourhood centred at (cell_x, cell_y); k odd.
// Out-of-bounds neighbours clamp to the border.
Eigen::VectorXd window_pool(const FeatureGrid& grid, const Eigen::Vector2i& cell, int k);

// (eps0 / T) * sum over frames, points and classes of -truth * log(pred).
// `predicted` holds per-frame, per-point 15-way distributions; `truth` the
// aligned one-hot labels. Zero predicted probability is only an error where
// the truth is non-zero.
double crr_cross_entropy(const std::vector<std::vector<std::array<double, 15>>>& predicted,
                         const std::vector<std::vector<std::array<double, 15>>>& truth,
                         double eps0 = 0.006);

}  // namespace hoik
