#include "hoik/metrics.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "hoik/errors.hpp"
#include "hoik/kdtree.hpp"

namespace hoik {

namespace {

double mean_nearest(const std::vector<Eigen::Vector3d>& from, const KdTree& to) {
    double acc = 0.0;
    for (const auto& p : from) {
        acc += to.nearest(p).distance;
    }
    return acc / static_cast<double>(from.size());
}

}  // namespace

double chamfer(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
    if (a.empty() || b.empty()) {
        throw InvalidArgument("chamfer: empty point set");
    }
    const KdTree tree_a(a);
    const KdTree tree_b(b);
    const double meters = 0.5 * (mean_nearest(a, tree_b) + mean_nearest(b, tree_a));
    return 100.0 * meters;
}

SimilarityTransform procrustes_align(const std::vector<Eigen::Vector3d>& source,
                                     const std::vector<Eigen::Vector3d>& target) {
    if (source.size() != target.size()) {
        throw InvalidArgument("procrustes: correspondence size mismatch");
    }
    const int n = static_cast<int>(source.size());
    if (n < 3) {
        throw InvalidArgument("procrustes: need at least 3 corresponding pairs");
    }

    Eigen::Vector3d mu_s = Eigen::Vector3d::Zero(), mu_t = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
        mu_s += source[i];
        mu_t += target[i];
    }
    mu_s /= n;
    mu_t /= n;

    // Cross-covariance and source variance (Umeyama).
    Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
    double var_s = 0.0;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d ds = source[i] - mu_s;
        sigma += (target[i] - mu_t) * ds.transpose();
        var_s += ds.squaredNorm();
    }
    sigma /= n;
    var_s /= n;

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sv = svd.singularValues();
    // Rank < 2 means the configuration is collinear (or a point): rotation
    // about the common axis is unconstrained.
    if (sv(0) <= 0.0 || sv(1) <= 1e-12 * sv(0)) {
        throw DegenerateGeometry("procrustes: degenerate (collinear) configuration");
    }

    Eigen::Vector3d d = Eigen::Vector3d::Ones();
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
        d(2) = -1.0;  // reflection correction
    }

    SimilarityTransform out;
    out.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
    out.scale = sv.dot(d) / var_s;
    out.translation = mu_t - out.scale * (out.rotation * mu_s);
    return out;
}

double pa_chamfer(const std::vector<Eigen::Vector3d>& predicted,
                  const std::vector<Eigen::Vector3d>& truth) {
    const SimilarityTransform align = procrustes_align(predicted, truth);
    std::vector<Eigen::Vector3d> aligned;
    aligned.reserve(predicted.size());
    for (const auto& p : predicted) {
        aligned.push_back(align.apply(p));
    }
    return chamfer(aligned, truth);
}

MetricReport evaluate_meshes(const std::vector<Eigen::Vector3d>& predicted,
                             const std::vector<Eigen::Vector3d>& truth) {
    MetricReport report;
    report.chamfer_cm = chamfer(predicted, truth);
    report.alignment = procrustes_align(predicted, truth);
    std::vector<Eigen::Vector3d> aligned;
    aligned.reserve(predicted.size());
    for (const auto& p : predicted) {
        aligned.push_back(report.alignment.apply(p));
    }
    report.pa_chamfer_cm = chamfer(aligned, truth);
    return report;
}

}  // namespace hoik
