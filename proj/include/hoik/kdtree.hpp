#pragma once

#include <vector>

#include <Eigen/Core>

namespace hoik {

// Static 3D kd-tree. Nearest-neighbour queries return exactly what a brute
// force scan with the lowest-index tie rule would: equal distances resolve
// to the smaller point index, and subtrees at exactly the splitting distance
// are still visited. Immutable after construction; queries are const and may
// run concurrently.
class KdTree {
public:
    explicit KdTree(std::vector<Eigen::Vector3d> points);

    struct Hit {
        int index = -1;
        double distance = 0.0;
    };

    // Throws InvalidArgument when constructed empty.
    Hit nearest(const Eigen::Vector3d& query) const;

    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<Eigen::Vector3d>& points() const { return points_; }

private:
    struct Node {
        int point = -1;      // index into points_
        int axis = 0;
        int left = -1, right = -1;
    };

    int build(std::vector<int>& idx, int lo, int hi, int depth);
    void search(int node, const Eigen::Vector3d& query, int& best, double& best_d2) const;

    std::vector<Eigen::Vector3d> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace hoik
