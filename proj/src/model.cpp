#include "casreg/model.hpp"

#include <cmath>
#include <string>

#include "casreg/errors.hpp"
#include "casreg/rng.hpp"

namespace casreg {

namespace {

void check_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) {
        throw InvalidArgument("mlp needs at least an input and an output width");
    }
    for (int s : sizes) {
        if (s < 1) {
            throw InvalidArgument("mlp layer widths must be positive, got " + std::to_string(s));
        }
    }
}

} // namespace

nlohmann::json MlpParams::to_json() const {
    return nlohmann::json{{"sizes", sizes}, {"weights", weights}, {"biases", biases}};
}

MlpParams MlpParams::from_json(const nlohmann::json& j) {
    MlpParams p;
    p.sizes = j.at("sizes").get<std::vector<int>>();
    p.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    p.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    check_sizes(p.sizes);
    const std::size_t layers = p.sizes.size() - 1;
    if (p.weights.size() != layers || p.biases.size() != layers) {
        throw ParseError("mlp JSON layer count does not match 'sizes'");
    }
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = static_cast<std::size_t>(p.sizes[l]);
        const std::size_t out = static_cast<std::size_t>(p.sizes[l + 1]);
        if (p.weights[l].size() != in * out || p.biases[l].size() != out) {
            throw ParseError("mlp JSON layer " + std::to_string(l) + " has inconsistent shapes");
        }
    }
    return p;
}

MlpParams init_mlp(const std::vector<int>& sizes, std::uint64_t seed) {
    check_sizes(sizes);
    MlpParams params;
    params.sizes = sizes;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t in = static_cast<std::size_t>(sizes[l]);
        const std::size_t out = static_cast<std::size_t>(sizes[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(in));
        std::vector<double> w(in * out);
        for (double& v : w) {
            v = rng.uniform(-limit, limit);
        }
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(out, 0.0);
    }
    return params;
}

std::vector<double> forward(const MlpParams& params, std::span<const double> features, ForwardCache* cache) {
    if (static_cast<int>(features.size()) != params.input_dim()) {
        throw DimensionError("forward: got " + std::to_string(features.size()) + " features for an input width of " +
                             std::to_string(params.input_dim()));
    }
    std::vector<double> current(features.begin(), features.end());
    if (cache != nullptr) {
        cache->activations.clear();
        cache->preacts.clear();
        cache->activations.push_back(current);
    }
    const int layers = params.n_layers();
    for (int l = 0; l < layers; ++l) {
        const std::size_t in = static_cast<std::size_t>(params.sizes[static_cast<std::size_t>(l)]);
        const std::size_t out = static_cast<std::size_t>(params.sizes[static_cast<std::size_t>(l) + 1]);
        const auto& w = params.weights[static_cast<std::size_t>(l)];
        const auto& b = params.biases[static_cast<std::size_t>(l)];
        std::vector<double> next(out);
        for (std::size_t o = 0; o < out; ++o) {
            double acc = b[o];
            const double* row = w.data() + o * in;
            for (std::size_t i = 0; i < in; ++i) {
                acc += row[i] * current[i];
            }
            next[o] = acc;
        }
        if (cache != nullptr) {
            cache->preacts.push_back(next);
        }
        if (l + 1 < layers) {
            for (double& v : next) {
                v = v > 0.0 ? v : 0.0;
            }
        }
        if (cache != nullptr) {
            cache->activations.push_back(next);
        }
        current = std::move(next);
    }
    return current;
}

MlpGrads MlpGrads::zeros_like(const MlpParams& params) {
    MlpGrads g;
    for (const auto& w : params.weights) g.weights.emplace_back(w.size(), 0.0);
    for (const auto& b : params.biases) g.biases.emplace_back(b.size(), 0.0);
    return g;
}

void MlpGrads::scale(double factor) {
    for (auto& w : weights)
        for (double& v : w) v *= factor;
    for (auto& b : biases)
        for (double& v : b) v *= factor;
}

void accumulate_backward(const MlpParams& params, const ForwardCache& cache,
                         std::span<const double> dloss_dlogits, MlpGrads& into) {
    const int layers = params.n_layers();
    if (cache.preacts.size() != static_cast<std::size_t>(layers) ||
        cache.activations.size() != static_cast<std::size_t>(layers) + 1) {
        throw DimensionError("backward: cache does not match the network depth");
    }
    if (static_cast<int>(dloss_dlogits.size()) != params.output_dim()) {
        throw DimensionError("backward: got " + std::to_string(dloss_dlogits.size()) +
                             " upstream gradients for an output width of " + std::to_string(params.output_dim()));
    }

    std::vector<double> delta(dloss_dlogits.begin(), dloss_dlogits.end());
    for (int l = layers - 1; l >= 0; --l) {
        const std::size_t in = static_cast<std::size_t>(params.sizes[static_cast<std::size_t>(l)]);
        const std::size_t out = static_cast<std::size_t>(params.sizes[static_cast<std::size_t>(l) + 1]);
        const auto& input = cache.activations[static_cast<std::size_t>(l)];
        const auto& w = params.weights[static_cast<std::size_t>(l)];
        auto& gw = into.weights[static_cast<std::size_t>(l)];
        auto& gb = into.biases[static_cast<std::size_t>(l)];

        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            double* row = gw.data() + o * in;
            for (std::size_t i = 0; i < in; ++i) {
                row[i] += d * input[i];
            }
        }

        if (l > 0) {
            std::vector<double> prev(in, 0.0);
            for (std::size_t o = 0; o < out; ++o) {
                const double d = delta[o];
                const double* row = w.data() + o * in;
                for (std::size_t i = 0; i < in; ++i) {
                    prev[i] += d * row[i];
                }
            }
            // ReLU mask from the previous layer's pre-activations.
            const auto& z = cache.preacts[static_cast<std::size_t>(l) - 1];
            for (std::size_t i = 0; i < in; ++i) {
                if (z[i] <= 0.0) prev[i] = 0.0;
            }
            delta = std::move(prev);
        }
    }
}

MlpGrads backward(const MlpParams& params, const ForwardCache& cache, std::span<const double> dloss_dlogits) {
    MlpGrads grads = MlpGrads::zeros_like(params);
    accumulate_backward(params, cache, dloss_dlogits, grads);
    return grads;
}

nlohmann::json AdamState::to_json() const {
    return nlohmann::json{{"lr", lr},
                          {"beta1", beta1},
                          {"beta2", beta2},
                          {"eps", eps},
                          {"weight_decay", weight_decay},
                          {"decoupled", decoupled},
                          {"step", step},
                          {"m_w", m_w},
                          {"v_w", v_w},
                          {"m_b", m_b},
                          {"v_b", v_b}};
}

AdamState AdamState::from_json(const nlohmann::json& j) {
    AdamState s;
    s.lr = j.at("lr").get<double>();
    s.beta1 = j.at("beta1").get<double>();
    s.beta2 = j.at("beta2").get<double>();
    s.eps = j.at("eps").get<double>();
    s.weight_decay = j.at("weight_decay").get<double>();
    s.decoupled = j.at("decoupled").get<bool>();
    s.step = j.at("step").get<long long>();
    s.m_w = j.at("m_w").get<std::vector<std::vector<double>>>();
    s.v_w = j.at("v_w").get<std::vector<std::vector<double>>>();
    s.m_b = j.at("m_b").get<std::vector<std::vector<double>>>();
    s.v_b = j.at("v_b").get<std::vector<std::vector<double>>>();
    return s;
}

AdamState make_adam(const MlpParams& params, double lr, double weight_decay, bool decoupled) {
    if (!(lr >= 0.0)) {
        throw InvalidArgument("adam learning rate must be >= 0");
    }
    AdamState s;
    s.lr = lr;
    s.weight_decay = weight_decay;
    s.decoupled = decoupled;
    for (const auto& w : params.weights) {
        s.m_w.emplace_back(w.size(), 0.0);
        s.v_w.emplace_back(w.size(), 0.0);
    }
    for (const auto& b : params.biases) {
        s.m_b.emplace_back(b.size(), 0.0);
        s.v_b.emplace_back(b.size(), 0.0);
    }
    return s;
}

namespace {

void adam_update(std::vector<double>& param, const std::vector<double>& grad, std::vector<double>& m,
                 std::vector<double>& v, const AdamState& s, double bc1, double bc2, bool decay) {
    if (param.size() != grad.size()) {
        throw DimensionError("adam_step: gradient shape does not match the parameters");
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
        double g = grad[i];
        if (decay && !s.decoupled) {
            g += s.weight_decay * param[i];
        }
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g;
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g * g;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        param[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.eps);
        if (decay && s.decoupled) {
            param[i] -= s.lr * s.weight_decay * param[i];
        }
    }
}

} // namespace

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    if (grads.weights.size() != params.weights.size() || grads.biases.size() != params.biases.size()) {
        throw DimensionError("adam_step: gradient layer count does not match the parameters");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        adam_update(params.weights[l], grads.weights[l], state.m_w[l], state.v_w[l], state, bc1, bc2, true);
        // Biases are conventionally excluded from weight decay.
        adam_update(params.biases[l], grads.biases[l], state.m_b[l], state.v_b[l], state, bc1, bc2, false);
    }
}

} // namespace casreg
