#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace hoik {

// Fully connected network with tanh hidden activations and a linear head.
struct MLPParams {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.front().cols()); }
    int output_dim() const { return weights.empty() ? 0 : static_cast<int>(weights.back().rows()); }

    void validate() const;
};

// Seeded init: hidden weights uniform in +-1/sqrt(fan_in), hidden biases zero.
// The head layer starts at exactly zero so the initial network output is the
// bias vector; the IK solver seeds the head bias so the initial twist-swing
// increment is the identity (the initial loss then measures the unperturbed
// pose, and the stop rule is relative to that).
MLPParams mlp_init(int input_dim, const std::vector<int>& hidden_sizes, int output_dim,
                   std::uint64_t seed);

// Plain (untaped) forward pass.
Eigen::VectorXd mlp_eval(const MLPParams& params, const Eigen::VectorXd& input);

}  // namespace hoik
