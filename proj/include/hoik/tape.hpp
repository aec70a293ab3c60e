#pragma once

#include <vector>

#include <Eigen/Core>

namespace hoik {

// Reverse-mode tape over matrix-valued nodes (scalars are 1x1, vectors n x 1).
//
// Node values are computed eagerly at construction. Leaves can be mutated
// in place afterwards (leaf_value() / set_leaf()), then forward() recomputes
// all primal values in topological order and backward(root) accumulates
// adjoints for everything reachable from a scalar root node. The graph is
// static: one tape is built per problem and re-evaluated per iteration.
//
// A tape is single-threaded; distinct tapes are independent.
class Tape {
public:
    using NodeId = int;

    // Leaves. set_leaf / leaf_value mutate in place (shape is fixed).
    NodeId leaf(const Eigen::MatrixXd& value);
    NodeId leaf(double scalar);
    NodeId constant(const Eigen::MatrixXd& value) { return leaf(value); }
    NodeId constant(double scalar) { return leaf(scalar); }

    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId neg(NodeId a);
    NodeId mul(NodeId a, NodeId b);          // elementwise, equal shapes
    NodeId scalar_mul(NodeId s, NodeId m);   // s is 1x1
    NodeId scale_const(NodeId a, double c);
    NodeId div(NodeId a, NodeId b);          // elementwise, or b 1x1
    NodeId matmul(NodeId a, NodeId b);
    NodeId transpose(NodeId a);
    NodeId sin(NodeId a);
    NodeId cos(NodeId a);
    NodeId tanh(NodeId a);
    NodeId sqrt(NodeId a);
    NodeId sum(NodeId a);                    // -> 1x1
    NodeId squared_norm(NodeId a);           // -> 1x1
    NodeId norm(NodeId a);                   // -> 1x1
    NodeId dot(NodeId a, NodeId b);          // -> 1x1
    NodeId cross(NodeId a, NodeId b);        // 3x1 x 3x1
    NodeId skew(NodeId v);                   // 3x1 -> 3x3
    // v / |v|; |v| < 1e-8 raises DegenerateGeometry at evaluation time.
    NodeId normalize(NodeId v);
    // v / |v|, or the fixed fallback direction when |v| < 1e-8 (zero gradient
    // to v in that branch).
    NodeId normalize_or(NodeId v, const Eigen::Vector3d& fallback);
    NodeId slice_rows(NodeId a, int row0, int count);

    int size() const { return static_cast<int>(nodes_.size()); }

    const Eigen::MatrixXd& value(NodeId id) const { return nodes_[id].value; }
    double scalar_value(NodeId id) const { return nodes_[id].value(0, 0); }

    Eigen::MatrixXd& leaf_value(NodeId id);
    void set_leaf(NodeId id, const Eigen::MatrixXd& value);

    // Recompute all primal values from the current leaf values.
    void forward();

    // Accumulate adjoints of every node reachable from `root` (a 1x1 node);
    // unreachable leaves get zero adjoints. Requires a completed forward pass.
    void backward(NodeId root);

    const Eigen::MatrixXd& adjoint(NodeId id) const;

private:
    enum class Op {
        leaf, add, sub, neg, mul, scalar_mul, scale_const, div, matmul,
        transpose, sin, cos, tanh, sqrt, sum, squared_norm, norm, dot,
        cross, skew, normalize, normalize_or, slice_rows
    };

    struct Node {
        Op op;
        NodeId a = -1;
        NodeId b = -1;
        int i0 = 0, i1 = 0;          // slice_rows bounds
        double aux = 0.0;            // scale_const factor
        Eigen::MatrixXd value;
        Eigen::MatrixXd adjoint;
        Eigen::Vector3d fallback = Eigen::Vector3d::Zero();
        bool fallback_active = false;
    };

    NodeId push(Node node);
    void eval(Node& node);

    std::vector<Node> nodes_;
    bool forward_done_ = false;
};

}  // namespace hoik
