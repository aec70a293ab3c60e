#include "hoik/contact.hpp"

#include <algorithm>
#include <cmath>

#include "hoik/errors.hpp"
#include "hoik/skeleton.hpp"

namespace hoik {

void PartLabeledMesh::validate() const {
    if (vertices.empty()) {
        throw InvalidArgument("mesh: empty vertex set");
    }
    if (vertices.size() != parts.size()) {
        throw InvalidArgument("mesh: vertex/part count mismatch");
    }
    for (const auto& v : vertices) {
        if (!v.allFinite()) {
            throw InvalidArgument("mesh: non-finite vertex");
        }
    }
    for (int p : parts) {
        if (p < 1 || p > kBodyPartCount) {
            throw InvalidArgument("mesh: part label out of range");
        }
    }
}

std::array<double, 15> LabeledPointCloud::one_hot(int i) const {
    std::array<double, 15> out{};
    out[labels[i] - 1] = 1.0;
    return out;
}

KdTree::Hit nearest_distance(const Eigen::Vector3d& point, const PartLabeledMesh& mesh) {
    mesh.validate();
    const KdTree tree(mesh.vertices);
    return tree.nearest(point);
}

LabeledPointCloud contact_labels(const std::vector<Eigen::Vector3d>& object_points,
                                 const PartLabeledMesh& mesh, double threshold) {
    mesh.validate();
    if (object_points.empty()) {
        throw InvalidArgument("contact_labels: empty object point cloud");
    }
    const KdTree tree(mesh.vertices);
    LabeledPointCloud out;
    out.points = object_points;
    out.labels.reserve(object_points.size());
    for (const auto& p : object_points) {
        if (!p.allFinite()) {
            throw InvalidArgument("contact_labels: non-finite object point");
        }
        const auto hit = tree.nearest(p);
        out.labels.push_back(hit.distance < threshold ? mesh.parts[hit.index] : kNoContactLabel);
    }
    return out;
}

FeatureGrid FeatureGrid::zeros(int height, int width, int channels) {
    if (height < 1 || width < 1 || channels < 1) {
        throw InvalidArgument("feature grid: dimensions must be positive");
    }
    FeatureGrid g;
    g.height = height;
    g.width = width;
    g.channels = channels;
    g.data.assign(static_cast<size_t>(height) * width * channels, 0.0);
    return g;
}

double& FeatureGrid::at(int h, int w, int c) {
    return data[(static_cast<size_t>(h) * width + w) * channels + c];
}

double FeatureGrid::at(int h, int w, int c) const {
    return data[(static_cast<size_t>(h) * width + w) * channels + c];
}

void FeatureGrid::validate() const {
    if (height < 1 || width < 1 || channels < 1 ||
        data.size() != static_cast<size_t>(height) * width * channels) {
        throw InvalidArgument("feature grid: inconsistent dimensions");
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("feature grid: non-finite entry");
        }
    }
}

Eigen::VectorXd window_pool(const FeatureGrid& grid, const Eigen::Vector2i& cell, int k) {
    grid.validate();
    if (k < 1 || k % 2 == 0) {
        throw InvalidArgument("window_pool: window size must be odd and >= 1");
    }
    if (cell.x() < 0 || cell.x() >= grid.width || cell.y() < 0 || cell.y() >= grid.height) {
        throw InvalidArgument("window_pool: cell outside the grid");
    }
    const int half = (k - 1) / 2;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.channels);
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            const int h = std::clamp(cell.y() + dy, 0, grid.height - 1);
            const int w = std::clamp(cell.x() + dx, 0, grid.width - 1);
            for (int c = 0; c < grid.channels; ++c) {
                acc[c] += grid.at(h, w, c);
            }
        }
    }
    return acc / static_cast<double>(k * k);
}

double crr_cross_entropy(const std::vector<std::vector<std::array<double, 15>>>& predicted,
                         const std::vector<std::vector<std::array<double, 15>>>& truth,
                         double eps0) {
    if (predicted.empty() || predicted.size() != truth.size()) {
        throw InvalidArgument("crr_cross_entropy: frame count mismatch");
    }
    double total = 0.0;
    for (size_t f = 0; f < predicted.size(); ++f) {
        if (predicted[f].size() != truth[f].size()) {
            throw InvalidArgument("crr_cross_entropy: point count mismatch at frame " +
                                  std::to_string(f));
        }
        for (size_t i = 0; i < predicted[f].size(); ++i) {
            const auto& p = predicted[f][i];
            const auto& t = truth[f][i];
            double sum = 0.0;
            for (int j = 0; j < 15; ++j) {
                if (p[j] < 0.0) {
                    throw InvalidArgument("crr_cross_entropy: negative probability");
                }
                sum += p[j];
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                throw InvalidArgument("crr_cross_entropy: prediction does not sum to 1");
            }
            for (int j = 0; j < 15; ++j) {
                if (t[j] == 0.0) {
                    continue;  // 0 * log(p) contributes nothing
                }
                if (p[j] <= 0.0) {
                    throw InvalidArgument("crr_cross_entropy: zero probability on the true class");
                }
                total -= t[j] * std::log(p[j]);
            }
        }
    }
    return eps0 * total / static_cast<double>(predicted.size());
}

}  // namespace hoik
