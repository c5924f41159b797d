#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "casreg/core.hpp"
#include "casreg/data.hpp"
#include "casreg/losses.hpp"
#include "casreg/metrics.hpp"
#include "casreg/model.hpp"

namespace casreg {

// Everything the training loop needs. The loss strengths and schedule
// momentum live inside `loss`; the three toggles switch whole mechanisms off
// for ablation runs.
struct TrainConfig {
    int epochs = 40;
    int batch_size = 32;
    double learning_rate = 1e-3;
    LossWeights loss;
    std::vector<int> hidden = {64, 64};
    int n_bins = 5;
    std::uint64_t seed = 1;
    bool pseudo_labels = true;
    bool rank_loss = true;
    bool elr = true;
    double label_scale = 1.0;
    double weight_decay = 0.01;
    bool decoupled_weight_decay = false;
    std::string val_metric = "censored_mae"; // censored_mae | uncensored_mae | c_index

    void validate() const;
    nlohmann::json to_json() const;
    std::string fingerprint() const;
};

// One completed epoch. Loss columns are the epoch means of the weighted
// per-batch terms; validation metrics are patient-level on the untouched
// validation labels. Absent values are NaN.
struct EpochRecord {
    int epoch = 0;
    double pseudo_ratio = 0.0;
    long long pseudo_count = 0;
    double loss_total = 0.0;
    double loss_ca_mse = 0.0;
    double loss_elr = 0.0;
    double loss_pen = 0.0;
    double loss_rank = 0.0;
    double val_censored_mae = 0.0;
    double val_c_index = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;

    std::string to_csv() const;
};

// Self-contained snapshot of a trained model: parameters, optimizer state,
// the day-unit bin schedule and the fingerprint of the config that produced
// it.
struct Checkpoint {
    MlpParams params;
    AdamState adam;
    BinSchedule schedule;
    double label_scale = 1.0;
    int best_epoch = 0;
    std::string config_fingerprint;

    nlohmann::json to_json() const;
    static Checkpoint from_json(const nlohmann::json& j);

    // Atomic write: temp file in the same directory, then rename.
    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

struct TrainResult {
    Checkpoint best;
    TrainHistory history;
};

// Runs the full training loop: per-epoch pseudo-labeling of censored
// samples, seeded shuffling, minibatched combined-loss optimization with
// Adam, ensemble maintenance and per-epoch validation. Returns the
// checkpoint of the epoch with the best validation metric. Fully
// deterministic given the config seed. `schedule` overrides the bin plan
// otherwise computed from the training times.
TrainResult train(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config,
                  const std::optional<BinSchedule>& schedule = std::nullopt);

// Day-unit predictions for every sample of the dataset.
std::vector<PredRecord> predict(const Checkpoint& checkpoint, const Dataset& dataset);

// Sample- and patient-level metrics of a checkpoint on a dataset.
MetricsReport evaluate(const Checkpoint& checkpoint, const Dataset& dataset);

} // namespace casreg
