#include "hoik/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hoik/errors.hpp"

namespace hoik {

KdTree::KdTree(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!p.allFinite()) {
            throw InvalidArgument("kdtree: non-finite point");
        }
    }
    if (!points_.empty()) {
        std::vector<int> idx(points_.size());
        std::iota(idx.begin(), idx.end(), 0);
        nodes_.reserve(points_.size());
        root_ = build(idx, 0, static_cast<int>(points_.size()), 0);
    }
}

int KdTree::build(std::vector<int>& idx, int lo, int hi, int depth) {
    if (lo >= hi) {
        return -1;
    }
    const int axis = depth % 3;
    const int mid = lo + (hi - lo) / 2;
    // Secondary order by index keeps the layout deterministic.
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](int a, int b) {
                         const double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    Node node;
    node.point = idx[mid];
    node.axis = axis;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(idx, lo, mid, depth + 1);
    nodes_[self].right = build(idx, mid + 1, hi, depth + 1);
    return self;
}

void KdTree::search(int node, const Eigen::Vector3d& query, int& best, double& best_d2) const {
    if (node < 0) {
        return;
    }
    const Node& n = nodes_[node];
    const Eigen::Vector3d& p = points_[n.point];
    const double d2 = (query - p).squaredNorm();
    if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
        best_d2 = d2;
        best = n.point;
    }
    const double delta = query[n.axis] - p[n.axis];
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;
    search(near, query, best, best_d2);
    // <=: an equally distant point on the far side may win the index tie.
    if (delta * delta <= best_d2) {
        search(far, query, best, best_d2);
    }
}

KdTree::Hit KdTree::nearest(const Eigen::Vector3d& query) const {
    if (points_.empty()) {
        throw InvalidArgument("kdtree: nearest on empty set");
    }
    int best = static_cast<int>(points_.size());
    double best_d2 = std::numeric_limits<double>::infinity();
    search(root_, query, best, best_d2);
    return {best, std::sqrt(best_d2)};
}

}  // namespace hoik
