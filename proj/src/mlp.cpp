#include "hoik/mlp.hpp"

#include <cmath>
#include <random>

#include "hoik/errors.hpp"

namespace hoik {

void MLPParams::validate() const {
    if (weights.empty() || weights.size() != biases.size()) {
        throw InvalidArgument("mlp: empty or inconsistent layer lists");
    }
    for (size_t l = 0; l < weights.size(); ++l) {
        if (!weights[l].allFinite() || !biases[l].allFinite()) {
            throw InvalidArgument("mlp: non-finite parameters");
        }
        if (weights[l].rows() != biases[l].size()) {
            throw InvalidArgument("mlp: bias size mismatch at layer " + std::to_string(l));
        }
        if (l > 0 && weights[l].cols() != weights[l - 1].rows()) {
            throw InvalidArgument("mlp: chained shape mismatch at layer " + std::to_string(l));
        }
    }
}

MLPParams mlp_init(int input_dim, const std::vector<int>& hidden_sizes, int output_dim,
                   std::uint64_t seed) {
    if (input_dim < 1 || output_dim < 1) {
        throw InvalidArgument("mlp_init: dimensions must be positive");
    }
    for (int h : hidden_sizes) {
        if (h < 1) {
            throw InvalidArgument("mlp_init: hidden sizes must be positive");
        }
    }
    std::mt19937_64 rng(seed);
    MLPParams params;
    int fan_in = input_dim;
    for (int h : hidden_sizes) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        Eigen::MatrixXd w(h, fan_in);
        for (int r = 0; r < w.rows(); ++r) {
            for (int c = 0; c < w.cols(); ++c) {
                w(r, c) = dist(rng);
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(Eigen::VectorXd::Zero(h));
        fan_in = h;
    }
    params.weights.push_back(Eigen::MatrixXd::Zero(output_dim, fan_in));
    params.biases.push_back(Eigen::VectorXd::Zero(output_dim));
    return params;
}

Eigen::VectorXd mlp_eval(const MLPParams& params, const Eigen::VectorXd& input) {
    params.validate();
    if (input.size() != params.input_dim()) {
        throw InvalidArgument("mlp_eval: input dimension mismatch");
    }
    Eigen::VectorXd h = input;
    const int layers = params.layer_count();
    for (int l = 0; l < layers; ++l) {
        h = params.weights[l] * h + params.biases[l];
        if (l + 1 < layers) {
            h = h.array().tanh();
        }
    }
    return h;
}

}  // namespace hoik
