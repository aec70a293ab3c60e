#include "hoik/tape.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "hoik/errors.hpp"

namespace hoik {

namespace {
void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument(std::string("tape: shape mismatch in ") + what);
    }
}
void check_vec3(const Eigen::MatrixXd& v, const char* what) {
    if (v.rows() != 3 || v.cols() != 1) {
        throw InvalidArgument(std::string("tape: expected 3-vector in ") + what);
    }
}
void check_scalar(const Eigen::MatrixXd& v, const char* what) {
    if (v.rows() != 1 || v.cols() != 1) {
        throw InvalidArgument(std::string("tape: expected scalar in ") + what);
    }
}
}  // namespace

Tape::NodeId Tape::push(Node node) {
    if (node.op != Op::leaf) {
        eval(node);
    }
    node.adjoint = Eigen::MatrixXd::Zero(node.value.rows(), node.value.cols());
    nodes_.push_back(std::move(node));
    forward_done_ = true;  // values are current right after construction
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::leaf(const Eigen::MatrixXd& value) {
    if (!value.allFinite()) {
        throw InvalidArgument("tape: non-finite leaf value");
    }
    Node n;
    n.op = Op::leaf;
    n.value = value;
    return push(std::move(n));
}

Tape::NodeId Tape::leaf(double scalar) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = scalar;
    return leaf(m);
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    check_same_shape(nodes_[a].value, nodes_[b].value, "add");
    Node n; n.op = Op::add; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
    check_same_shape(nodes_[a].value, nodes_[b].value, "sub");
    Node n; n.op = Op::sub; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::neg(NodeId a) {
    Node n; n.op = Op::neg; n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    check_same_shape(nodes_[a].value, nodes_[b].value, "mul");
    Node n; n.op = Op::mul; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::scalar_mul(NodeId s, NodeId m) {
    check_scalar(nodes_[s].value, "scalar_mul");
    Node n; n.op = Op::scalar_mul; n.a = s; n.b = m;
    return push(std::move(n));
}

Tape::NodeId Tape::scale_const(NodeId a, double c) {
    Node n; n.op = Op::scale_const; n.a = a; n.aux = c;
    return push(std::move(n));
}

Tape::NodeId Tape::div(NodeId a, NodeId b) {
    const auto& vb = nodes_[b].value;
    if (!(vb.rows() == 1 && vb.cols() == 1)) {
        check_same_shape(nodes_[a].value, vb, "div");
    }
    Node n; n.op = Op::div; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
    if (nodes_[a].value.cols() != nodes_[b].value.rows()) {
        throw InvalidArgument("tape: inner dimension mismatch in matmul");
    }
    Node n; n.op = Op::matmul; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::transpose(NodeId a) {
    Node n; n.op = Op::transpose; n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::sin(NodeId a)  { Node n; n.op = Op::sin;  n.a = a; return push(std::move(n)); }
Tape::NodeId Tape::cos(NodeId a)  { Node n; n.op = Op::cos;  n.a = a; return push(std::move(n)); }
Tape::NodeId Tape::tanh(NodeId a) { Node n; n.op = Op::tanh; n.a = a; return push(std::move(n)); }
Tape::NodeId Tape::sqrt(NodeId a) { Node n; n.op = Op::sqrt; n.a = a; return push(std::move(n)); }
Tape::NodeId Tape::sum(NodeId a)  { Node n; n.op = Op::sum;  n.a = a; return push(std::move(n)); }

Tape::NodeId Tape::squared_norm(NodeId a) {
    Node n; n.op = Op::squared_norm; n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::norm(NodeId a) {
    Node n; n.op = Op::norm; n.a = a;
    return push(std::move(n));
}

Tape::NodeId Tape::dot(NodeId a, NodeId b) {
    check_same_shape(nodes_[a].value, nodes_[b].value, "dot");
    Node n; n.op = Op::dot; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::cross(NodeId a, NodeId b) {
    check_vec3(nodes_[a].value, "cross");
    check_vec3(nodes_[b].value, "cross");
    Node n; n.op = Op::cross; n.a = a; n.b = b;
    return push(std::move(n));
}

Tape::NodeId Tape::skew(NodeId v) {
    check_vec3(nodes_[v].value, "skew");
    Node n; n.op = Op::skew; n.a = v;
    return push(std::move(n));
}

Tape::NodeId Tape::normalize(NodeId v) {
    check_vec3(nodes_[v].value, "normalize");
    Node n; n.op = Op::normalize; n.a = v;
    return push(std::move(n));
}

Tape::NodeId Tape::normalize_or(NodeId v, const Eigen::Vector3d& fallback) {
    check_vec3(nodes_[v].value, "normalize_or");
    Node n; n.op = Op::normalize_or; n.a = v; n.fallback = fallback;
    return push(std::move(n));
}

Tape::NodeId Tape::slice_rows(NodeId a, int row0, int count) {
    if (row0 < 0 || count < 1 || row0 + count > nodes_[a].value.rows()) {
        throw InvalidArgument("tape: slice_rows out of range");
    }
    Node n; n.op = Op::slice_rows; n.a = a; n.i0 = row0; n.i1 = count;
    return push(std::move(n));
}

Eigen::MatrixXd& Tape::leaf_value(NodeId id) {
    if (nodes_[id].op != Op::leaf) {
        throw InvalidArgument("tape: node is not a leaf");
    }
    forward_done_ = false;
    return nodes_[id].value;
}

void Tape::set_leaf(NodeId id, const Eigen::MatrixXd& value) {
    Eigen::MatrixXd& dst = leaf_value(id);
    check_same_shape(dst, value, "set_leaf");
    dst = value;
}

void Tape::eval(Node& n) {
    const auto& va = n.a >= 0 ? nodes_[n.a].value : n.value;
    switch (n.op) {
        case Op::leaf:
            break;
        case Op::add:
            n.value = va + nodes_[n.b].value;
            break;
        case Op::sub:
            n.value = va - nodes_[n.b].value;
            break;
        case Op::neg:
            n.value = -va;
            break;
        case Op::mul:
            n.value = va.cwiseProduct(nodes_[n.b].value);
            break;
        case Op::scalar_mul:
            n.value = va(0, 0) * nodes_[n.b].value;
            break;
        case Op::scale_const:
            n.value = n.aux * va;
            break;
        case Op::div: {
            const auto& vb = nodes_[n.b].value;
            if (vb.rows() == 1 && vb.cols() == 1) {
                n.value = va / vb(0, 0);
            } else {
                n.value = va.cwiseQuotient(vb);
            }
            break;
        }
        case Op::matmul:
            n.value.noalias() = va * nodes_[n.b].value;
            break;
        case Op::transpose:
            n.value = va.transpose();
            break;
        case Op::sin:
            n.value = va.array().sin();
            break;
        case Op::cos:
            n.value = va.array().cos();
            break;
        case Op::tanh:
            n.value = va.array().tanh();
            break;
        case Op::sqrt:
            n.value = va.array().sqrt();
            break;
        case Op::sum:
            n.value.resize(1, 1);
            n.value(0, 0) = va.sum();
            break;
        case Op::squared_norm:
            n.value.resize(1, 1);
            n.value(0, 0) = va.squaredNorm();
            break;
        case Op::norm:
            n.value.resize(1, 1);
            n.value(0, 0) = va.norm();
            break;
        case Op::dot:
            n.value.resize(1, 1);
            n.value(0, 0) = va.cwiseProduct(nodes_[n.b].value).sum();
            break;
        case Op::cross: {
            const Eigen::Vector3d a3 = va.col(0);
            const Eigen::Vector3d b3 = nodes_[n.b].value.col(0);
            n.value = a3.cross(b3);
            break;
        }
        case Op::skew: {
            const Eigen::Vector3d v = va.col(0);
            n.value.resize(3, 3);
            n.value << 0.0, -v.z(), v.y(),
                       v.z(), 0.0, -v.x(),
                      -v.y(), v.x(), 0.0;
            break;
        }
        case Op::normalize: {
            const double len = va.norm();
            if (len < 1e-8) {
                throw DegenerateGeometry("tape: normalize of near-zero vector");
            }
            n.value = va / len;
            break;
        }
        case Op::normalize_or: {
            const double len = va.norm();
            n.fallback_active = len < 1e-8;
            if (n.fallback_active) {
                n.value = n.fallback;
            } else {
                n.value = va / len;
            }
            break;
        }
        case Op::slice_rows:
            n.value = va.middleRows(n.i0, n.i1);
            break;
    }
}

void Tape::forward() {
    for (auto& n : nodes_) {
        if (n.op != Op::leaf) {
            eval(n);
        }
    }
    forward_done_ = true;
}

void Tape::backward(NodeId root) {
    if (!forward_done_) {
        throw StateError("tape: backward before forward");
    }
    check_scalar(nodes_[root].value, "backward root");

    for (auto& n : nodes_) {
        n.adjoint.setZero();
    }
    nodes_[root].adjoint(0, 0) = 1.0;

    for (int id = root; id >= 0; --id) {
        Node& n = nodes_[id];
        const Eigen::MatrixXd& g = n.adjoint;
        if (n.op == Op::leaf || g.isZero(0.0)) {
            continue;
        }
        Eigen::MatrixXd& da = nodes_[n.a].adjoint;
        const Eigen::MatrixXd& va = nodes_[n.a].value;
        switch (n.op) {
            case Op::leaf:
                break;
            case Op::add:
                da += g;
                nodes_[n.b].adjoint += g;
                break;
            case Op::sub:
                da += g;
                nodes_[n.b].adjoint -= g;
                break;
            case Op::neg:
                da -= g;
                break;
            case Op::mul:
                da += g.cwiseProduct(nodes_[n.b].value);
                nodes_[n.b].adjoint += g.cwiseProduct(va);
                break;
            case Op::scalar_mul:
                da(0, 0) += g.cwiseProduct(nodes_[n.b].value).sum();
                nodes_[n.b].adjoint += va(0, 0) * g;
                break;
            case Op::scale_const:
                da += n.aux * g;
                break;
            case Op::div: {
                const auto& vb = nodes_[n.b].value;
                if (vb.rows() == 1 && vb.cols() == 1) {
                    const double s = vb(0, 0);
                    da += g / s;
                    nodes_[n.b].adjoint(0, 0) -= g.cwiseProduct(va).sum() / (s * s);
                } else {
                    da += g.cwiseQuotient(vb);
                    nodes_[n.b].adjoint -= g.cwiseProduct(va).cwiseQuotient(vb.cwiseProduct(vb));
                }
                break;
            }
            case Op::matmul:
                da.noalias() += g * nodes_[n.b].value.transpose();
                nodes_[n.b].adjoint.noalias() += va.transpose() * g;
                break;
            case Op::transpose:
                da += g.transpose();
                break;
            case Op::sin:
                da.array() += g.array() * va.array().cos();
                break;
            case Op::cos:
                da.array() -= g.array() * va.array().sin();
                break;
            case Op::tanh:
                da.array() += g.array() * (1.0 - n.value.array().square());
                break;
            case Op::sqrt:
                da.array() += g.array() * 0.5 / n.value.array().max(1e-12);
                break;
            case Op::sum:
                da.array() += g(0, 0);
                break;
            case Op::squared_norm:
                da += 2.0 * g(0, 0) * va;
                break;
            case Op::norm: {
                const double len = std::max(n.value(0, 0), 1e-30);
                da += (g(0, 0) / len) * va;
                break;
            }
            case Op::dot:
                da += g(0, 0) * nodes_[n.b].value;
                nodes_[n.b].adjoint += g(0, 0) * va;
                break;
            case Op::cross: {
                const Eigen::Vector3d a3 = va.col(0);
                const Eigen::Vector3d b3 = nodes_[n.b].value.col(0);
                const Eigen::Vector3d g3 = g.col(0);
                da += b3.cross(g3);
                nodes_[n.b].adjoint += g3.cross(a3);
                break;
            }
            case Op::skew:
                da(0, 0) += g(2, 1) - g(1, 2);
                da(1, 0) += g(0, 2) - g(2, 0);
                da(2, 0) += g(1, 0) - g(0, 1);
                break;
            case Op::normalize: {
                const double len = va.norm();
                const Eigen::VectorXd u = n.value.col(0);
                da += (g - u * u.col(0).dot(g.col(0))) / len;
                break;
            }
            case Op::normalize_or: {
                if (!n.fallback_active) {
                    const double len = va.norm();
                    const Eigen::VectorXd u = n.value.col(0);
                    da += (g - u * u.col(0).dot(g.col(0))) / len;
                }
                break;
            }
            case Op::slice_rows:
                da.middleRows(n.i0, n.i1) += g;
                break;
        }
    }
}

const Eigen::MatrixXd& Tape::adjoint(NodeId id) const {
    return nodes_[id].adjoint;
}

}  // namespace hoik
