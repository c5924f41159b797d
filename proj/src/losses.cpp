#include "casreg/losses.hpp"

#include <cmath>

#include "casreg/errors.hpp"

namespace casreg {

void LossWeights::validate() const {
    if (!(alpha >= 0.0)) throw InvalidArgument("loss.alpha must be >= 0");
    if (!(beta >= 0.0)) throw InvalidArgument("loss.beta must be >= 0");
    if (!(delta >= 0.0)) throw InvalidArgument("loss.delta must be >= 0");
    if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("loss.tau must lie strictly inside (0, 1)");
    if (!(psi >= 0.0 && psi <= 1.0)) throw InvalidArgument("loss.psi must lie in [0, 1]");
    if (!(elr_eps > 0.0 && elr_eps <= 0.1)) throw InvalidArgument("loss.elr_eps must lie in (0, 0.1]");
}

void TemporalEnsemble::update(const std::string& id, std::span<const double> logits, double psi) {
    auto it = q_.find(id);
    if (it == q_.end()) {
        it = q_.emplace(id, std::vector<double>(logits.size(), 0.0)).first;
    } else if (it->second.size() != logits.size()) {
        throw DimensionError("temporal ensemble entry '" + id + "' has length " + std::to_string(it->second.size()) +
                             " but got logits of length " + std::to_string(logits.size()));
    }
    auto& q = it->second;
    for (std::size_t n = 0; n < q.size(); ++n) {
        q[n] = psi * q[n] + (1.0 - psi) * logits[n];
    }
}

std::vector<double> TemporalEnsemble::logits_or_zero(const std::string& id, int n_bins) const {
    auto it = q_.find(id);
    if (it == q_.end()) {
        return std::vector<double>(static_cast<std::size_t>(n_bins), 0.0);
    }
    if (static_cast<int>(it->second.size()) != n_bins) {
        throw DimensionError("temporal ensemble entry '" + id + "' has length " + std::to_string(it->second.size()) +
                             " but " + std::to_string(n_bins) + " bins were requested");
    }
    return it->second;
}

ScalarLoss ca_mse(double t_hat, double y, int e, int s, double tau) {
    if (e == 1 && t_hat > y) {
        return {0.0, 0.0};
    }
    const double weight = (s == 1) ? tau : 1.0;
    const double diff = t_hat - y;
    return {weight * diff * diff, 2.0 * weight * diff};
}

VectorLoss elr_loss(std::span<const double> p, std::span<const double> q, double eps) {
    if (p.size() != q.size()) {
        throw DimensionError("elr_loss: p has length " + std::to_string(p.size()) + " but q has length " +
                             std::to_string(q.size()));
    }
    const std::size_t n = p.size();
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        inner += sigmoid(p[i]) * sigmoid(q[i]);
    }
    const double arg = 1.0 - inner / static_cast<double>(n);

    VectorLoss out;
    out.dloss_dp.assign(n, 0.0);
    if (arg < eps) {
        out.loss = std::log(eps);
        return out; // clamp active: gradient stays zero
    }
    out.loss = std::log(arg);
    for (std::size_t i = 0; i < n; ++i) {
        const double sp = sigmoid(p[i]);
        out.dloss_dp[i] = -(sp * (1.0 - sp) * sigmoid(q[i])) / (static_cast<double>(n) * arg);
    }
    return out;
}

VectorLoss pen_loss(std::span<const double> p) {
    const std::size_t n = p.size();
    VectorLoss out;
    out.dloss_dp.assign(n, 0.0);
    if (n < 2) {
        return out;
    }
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lo = sigmoid(p[i]);
        const double hi = sigmoid(p[i + 1]);
        const double gap = hi - lo;
        if (gap > 0.0) { // the kink itself contributes a zero subgradient
            out.loss += scale * gap;
            out.dloss_dp[i + 1] += scale * hi * (1.0 - hi);
            out.dloss_dp[i] -= scale * lo * (1.0 - lo);
        }
    }
    return out;
}

int rank_sign(double y_i, double y_j, int e_i, int e_j) {
    if (y_i > y_j && e_j == 0) return 1;
    if (y_i <= y_j && e_i == 0) return -1;
    return 0;
}

PairLoss ca_rank_loss(double t_hat_i, double t_hat_j, int g) {
    if (g == 0) {
        return {};
    }
    const double margin = -static_cast<double>(g) * (t_hat_i - t_hat_j);
    if (margin <= 0.0) {
        return {};
    }
    return {margin, -static_cast<double>(g), static_cast<double>(g)};
}

BatchLossResult batch_loss(std::span<const BatchItem> batch, const TemporalEnsemble& ensemble,
                           const BinSchedule& schedule, const LossWeights& weights) {
    if (batch.empty()) {
        throw InvalidArgument("batch_loss: empty batch");
    }
    weights.validate();

    const std::size_t batch_size = batch.size();
    const int n_bins = schedule.n_bins();
    const double inv_b = 1.0 / static_cast<double>(batch_size);
    const double inv_b2 = inv_b * inv_b;

    BatchLossResult out;
    out.dlogits.assign(batch_size, std::vector<double>(static_cast<std::size_t>(n_bins), 0.0));

    // Predicted times and their logit gradients, shared by the squared and
    // rank terms.
    std::vector<double> t_hat(batch_size);
    std::vector<std::vector<double>> dt_dp(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) {
        t_hat[i] = logits_to_time(batch[i].logits, schedule);
        dt_dp[i] = time_gradient(batch[i].logits, schedule);
    }

    // Accumulated d(loss)/d(t_hat_i) across the squared and rank terms; the
    // chain through the head is applied once at the end.
    std::vector<double> dloss_dt(batch_size, 0.0);

    for (std::size_t i = 0; i < batch_size; ++i) {
        const Sample& sample = *batch[i].sample;
        const ScalarLoss mse = ca_mse(t_hat[i], sample.y, sample.e, sample.s, weights.tau);
        out.ca_mse_term += inv_b * mse.loss;
        dloss_dt[i] += inv_b * mse.dloss_dt;

        if (weights.alpha > 0.0) {
            const std::vector<double> q = ensemble.logits_or_zero(sample.id, n_bins);
            const VectorLoss elr = elr_loss(batch[i].logits, q, weights.elr_eps);
            out.elr_term += inv_b * weights.alpha * elr.loss;
            for (int n = 0; n < n_bins; ++n) {
                out.dlogits[i][static_cast<std::size_t>(n)] +=
                    inv_b * weights.alpha * elr.dloss_dp[static_cast<std::size_t>(n)];
            }
        }

        if (weights.beta > 0.0) {
            const VectorLoss pen = pen_loss(batch[i].logits);
            out.pen_term += inv_b * weights.beta * pen.loss;
            for (int n = 0; n < n_bins; ++n) {
                out.dlogits[i][static_cast<std::size_t>(n)] +=
                    inv_b * weights.beta * pen.dloss_dp[static_cast<std::size_t>(n)];
            }
        }
    }

    if (weights.delta > 0.0 && batch_size >= 2) {
        for (std::size_t i = 0; i < batch_size; ++i) {
            const Sample& si = *batch[i].sample;
            for (std::size_t j = 0; j < batch_size; ++j) {
                const Sample& sj = *batch[j].sample;
                const int g = rank_sign(si.y, sj.y, si.e, sj.e);
                const PairLoss rank = ca_rank_loss(t_hat[i], t_hat[j], g);
                out.rank_term += inv_b2 * weights.delta * rank.loss;
                dloss_dt[i] += inv_b2 * weights.delta * rank.dloss_dti;
                dloss_dt[j] += inv_b2 * weights.delta * rank.dloss_dtj;
            }
        }
    }

    for (std::size_t i = 0; i < batch_size; ++i) {
        for (int n = 0; n < n_bins; ++n) {
            out.dlogits[i][static_cast<std::size_t>(n)] += dloss_dt[i] * dt_dp[i][static_cast<std::size_t>(n)];
        }
    }

    out.total = out.ca_mse_term + out.elr_term + out.pen_term + out.rank_term;
    return out;
}

} // namespace casreg
