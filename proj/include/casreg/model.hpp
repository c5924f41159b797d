#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace casreg {

// Fully connected network: ReLU on hidden layers, linear output. Weights are
// stored row-major, weights[l][o * in + i] connecting input i to output o.
struct MlpParams {
    std::vector<int> sizes; // {input, hidden..., output}
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return sizes.front(); }
    int output_dim() const { return sizes.back(); }
    int n_layers() const { return static_cast<int>(weights.size()); }

    nlohmann::json to_json() const;
    static MlpParams from_json(const nlohmann::json& j);
};

// He-style uniform fan-in initialization, biases zero. Identical seeds give
// identical parameters.
MlpParams init_mlp(const std::vector<int>& sizes, std::uint64_t seed);

// Per-layer values retained by the forward pass for backpropagation.
// activations[0] is the input, activations[l+1] the post-ReLU output of
// layer l (post-identity for the last layer). preacts[l] holds the affine
// outputs of layer l.
struct ForwardCache {
    std::vector<std::vector<double>> activations;
    std::vector<std::vector<double>> preacts;
};

// Computes the logits for one feature vector. Pass a cache to retain the
// intermediates needed by backward().
std::vector<double> forward(const MlpParams& params, std::span<const double> features,
                            ForwardCache* cache = nullptr);

struct MlpGrads {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static MlpGrads zeros_like(const MlpParams& params);
    void scale(double factor);
};

// Exact gradients of a scalar loss with respect to every parameter, given
// the upstream gradient d(loss)/d(logits) and the cache of the matching
// forward call.
MlpGrads backward(const MlpParams& params, const ForwardCache& cache, std::span<const double> dloss_dlogits);

// Same as backward() but adds into an existing accumulator, so a batch can
// share one gradient buffer.
void accumulate_backward(const MlpParams& params, const ForwardCache& cache,
                         std::span<const double> dloss_dlogits, MlpGrads& into);

// Adam moments and hyperparameters. `decoupled == false` folds the weight
// decay into the gradient before the moment updates (classic L2 reading);
// `true` applies it as a separate multiplicative shrink after the step.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    bool decoupled = false;
    long long step = 0;
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;

    nlohmann::json to_json() const;
    static AdamState from_json(const nlohmann::json& j);
};

AdamState make_adam(const MlpParams& params, double lr, double weight_decay, bool decoupled);

// One bias-corrected Adam update over all parameters.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

} // namespace casreg
