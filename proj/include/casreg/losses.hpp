#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casreg/core.hpp"

namespace casreg {

// Strengths and shared scalars for the combined training loss.
//   alpha — temporal-ensembling regularizer strength
//   beta  — bin penalization strength
//   delta — pairwise rank loss strength
//   tau   — down-weight applied to pseudo-labeled samples in the squared term
//   psi   — momentum of the prediction ensemble
//   elr_eps — clamp for the log argument of the ensemble regularizer
struct LossWeights {
    double alpha = 100.0;
    double beta = 1e6;
    double delta = 1.0;
    double tau = 0.5;
    double psi = 0.5;
    double elr_eps = 1e-7;

    void validate() const;
};

// Per-sample momentum average of past logit predictions, keyed by sample id.
// Ids never seen by update() read as the zero vector (sigmoid 0.5 per bin).
class TemporalEnsemble {
public:
    // q[id] <- psi * q_prev + (1 - psi) * logits, with q_prev = 0 for new ids.
    void update(const std::string& id, std::span<const double> logits, double psi);

    // Momentum logits for `id`, or a zero vector of length n_bins if unseen.
    std::vector<double> logits_or_zero(const std::string& id, int n_bins) const;

    bool contains(const std::string& id) const { return q_.count(id) != 0; }
    std::size_t size() const { return q_.size(); }

private:
    std::unordered_map<std::string, std::vector<double>> q_;
};

struct ScalarLoss {
    double loss = 0.0;
    double dloss_dt = 0.0;
};

struct VectorLoss {
    double loss = 0.0;
    std::vector<double> dloss_dp;
};

struct PairLoss {
    double loss = 0.0;
    double dloss_dti = 0.0;
    double dloss_dtj = 0.0;
};

// Censor-aware squared error. Zero when the sample is censored and the
// prediction already exceeds the censoring time; otherwise tau^s (t - y)^2.
ScalarLoss ca_mse(double t_hat, double y, int e, int s, double tau);

// log(max(eps, 1 - (1/N) sigmoid(p)^T sigmoid(q))). q is a constant: no
// gradient flows into the ensemble, and the gradient is zeroed when the
// clamp is active.
VectorLoss elr_loss(std::span<const double> p, std::span<const double> q, double eps);

// Mean hinge on adjacent bin activations: nonzero whenever a later bin is
// more active than an earlier one. Zero by convention for a single bin.
VectorLoss pen_loss(std::span<const double> p);

// Pairwise order target: +1 when i must outlive j, -1 when j must outlive i,
// 0 when censoring makes the pair incomparable. Branch order matters.
int rank_sign(double y_i, double y_j, int e_i, int e_j);

// Hinge max(0, -g (t_i - t_j)) with the subgradient chosen 0 at the kink.
PairLoss ca_rank_loss(double t_hat_i, double t_hat_j, int g);

struct BatchItem {
    const Sample* sample = nullptr;
    std::span<const double> logits;
};

// Combined batch loss. Each field already carries its strength weight, so
// total = ca_mse_term + elr_term + pen_term + rank_term.
struct BatchLossResult {
    double total = 0.0;
    double ca_mse_term = 0.0;
    double elr_term = 0.0;
    double pen_term = 0.0;
    double rank_term = 0.0;
    std::vector<std::vector<double>> dlogits; // one gradient per batch item
};

// Mean over the batch of [ca_mse + alpha*elr + beta*pen] plus
// delta / |B|^2 times the rank hinge over all ordered pairs. Terms with a
// zero strength are skipped entirely and contribute exactly 0. The ensemble
// is read, never written; the trainer updates it after the forward pass.
BatchLossResult batch_loss(std::span<const BatchItem> batch, const TemporalEnsemble& ensemble,
                           const BinSchedule& schedule, const LossWeights& weights);

} // namespace casreg
