#include "casreg/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "casreg/errors.hpp"
#include "casreg/pseudo.hpp"
#include "casreg/rng.hpp"
#include "casreg/text.hpp"

namespace casreg {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kShuffleStream = 0x73687566;
constexpr std::uint64_t kPseudoStream = 0x70736575;

BinSchedule scale_schedule(const BinSchedule& schedule, double factor) {
    if (factor == 1.0) {
        return schedule;
    }
    std::vector<double> bins = schedule.bins();
    for (double& b : bins) b *= factor;
    return BinSchedule(std::move(bins));
}

const char* first_non_finite_term(const BatchLossResult& r) {
    if (!std::isfinite(r.ca_mse_term)) return "ca_mse";
    if (!std::isfinite(r.elr_term)) return "elr";
    if (!std::isfinite(r.pen_term)) return "pen";
    if (!std::isfinite(r.rank_term)) return "rank";
    return nullptr;
}

} // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw InvalidArgument("train.epochs must be >= 1, got " + std::to_string(epochs));
    if (batch_size < 2) throw InvalidArgument("train.batch_size must be >= 2, got " + std::to_string(batch_size));
    if (!(learning_rate > 0.0)) throw InvalidArgument("train.learning_rate must be > 0");
    if (n_bins < 1) throw InvalidArgument("train.n_bins must be >= 1, got " + std::to_string(n_bins));
    if (!(label_scale > 0.0)) throw InvalidArgument("train.label_scale must be > 0");
    if (!(weight_decay >= 0.0)) throw InvalidArgument("train.weight_decay must be >= 0");
    for (int width : hidden) {
        if (width < 1) throw InvalidArgument("model.hidden widths must be positive, got " + std::to_string(width));
    }
    if (val_metric != "censored_mae" && val_metric != "uncensored_mae" && val_metric != "c_index") {
        throw InvalidArgument("train.val_metric must be censored_mae, uncensored_mae or c_index, got '" + val_metric +
                              "'");
    }
    loss.validate();
}

nlohmann::json TrainConfig::to_json() const {
    return nlohmann::json{{"epochs", epochs},
                          {"batch_size", batch_size},
                          {"learning_rate", learning_rate},
                          {"alpha", loss.alpha},
                          {"beta", loss.beta},
                          {"delta", loss.delta},
                          {"tau", loss.tau},
                          {"psi", loss.psi},
                          {"elr_eps", loss.elr_eps},
                          {"hidden", hidden},
                          {"n_bins", n_bins},
                          {"seed", seed},
                          {"pseudo_labels", pseudo_labels},
                          {"rank_loss", rank_loss},
                          {"elr", elr},
                          {"label_scale", label_scale},
                          {"weight_decay", weight_decay},
                          {"decoupled_weight_decay", decoupled_weight_decay},
                          {"val_metric", val_metric}};
}

std::string TrainConfig::fingerprint() const {
    return fnv1a_hex(to_json().dump());
}

std::string TrainHistory::to_csv() const {
    std::ostringstream out;
    out << "epoch,pseudo_ratio,pseudo_count,loss_total,loss_ca_mse,loss_elr,loss_pen,loss_rank,"
           "val_censored_mae,val_c_index\n";
    for (const auto& r : epochs) {
        out << r.epoch << ',' << format_double(r.pseudo_ratio) << ',' << r.pseudo_count << ','
            << format_double(r.loss_total) << ',' << format_double(r.loss_ca_mse) << ',' << format_double(r.loss_elr)
            << ',' << format_double(r.loss_pen) << ',' << format_double(r.loss_rank) << ','
            << format_double(r.val_censored_mae) << ',' << format_double(r.val_c_index) << "\n";
    }
    return out.str();
}

nlohmann::json Checkpoint::to_json() const {
    return nlohmann::json{{"format", "casreg-checkpoint"},
                          {"version", 1},
                          {"params", params.to_json()},
                          {"adam", adam.to_json()},
                          {"schedule", schedule.to_json()},
                          {"label_scale", label_scale},
                          {"best_epoch", best_epoch},
                          {"config_fingerprint", config_fingerprint}};
}

Checkpoint Checkpoint::from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "casreg-checkpoint") {
        throw ParseError("not a casreg checkpoint document");
    }
    Checkpoint ckpt{MlpParams::from_json(j.at("params")), AdamState::from_json(j.at("adam")),
                    BinSchedule::from_json(j.at("schedule")), j.at("label_scale").get<double>(),
                    j.at("best_epoch").get<int>(), j.at("config_fingerprint").get<std::string>()};
    if (ckpt.schedule.n_bins() != ckpt.params.output_dim()) {
        throw ParseError("checkpoint schedule has " + std::to_string(ckpt.schedule.n_bins()) +
                         " bins but the model outputs " + std::to_string(ckpt.params.output_dim()) + " logits");
    }
    if (!(ckpt.label_scale > 0.0)) {
        throw ParseError("checkpoint label_scale must be > 0");
    }
    return ckpt;
}

void Checkpoint::save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw IoError("cannot open '" + tmp + "' for writing");
        }
        out << to_json().dump(2) << "\n";
        if (!out) {
            throw IoError("failed while writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

TrainResult train(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config,
                  const std::optional<BinSchedule>& schedule) {
    config.validate();
    train_set.validate();
    val_set.validate();
    if (train_set.feature_dim != val_set.feature_dim) {
        throw DimensionError("train/validation feature dimensions differ: " + std::to_string(train_set.feature_dim) +
                             " vs " + std::to_string(val_set.feature_dim));
    }

    BinSchedule raw_schedule = [&] {
        if (schedule.has_value()) {
            return *schedule;
        }
        std::vector<double> times;
        times.reserve(train_set.samples.size());
        for (const auto& s : train_set.samples) times.push_back(s.y);
        return bin_plan(std::move(times), config.n_bins);
    }();

    const double scale = config.label_scale;
    const BinSchedule work_schedule = scale_schedule(raw_schedule, scale);
    const int n_bins = work_schedule.n_bins();

    // Training labels in working units. Rebuilt per epoch from this base so
    // pseudo labels never compound across epochs.
    std::vector<Sample> base = train_set.samples;
    if (scale != 1.0) {
        for (auto& s : base) s.y *= scale;
    }

    std::vector<std::string> censored_ids;
    std::vector<std::size_t> censored_indices;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].e == 1) {
            censored_ids.push_back(base[i].id);
            censored_indices.push_back(i);
        }
    }

    std::vector<int> sizes;
    sizes.push_back(train_set.feature_dim);
    for (int h : config.hidden) sizes.push_back(h);
    sizes.push_back(n_bins);

    MlpParams params = init_mlp(sizes, derive_seed(config.seed, kInitStream));
    AdamState adam = make_adam(params, config.learning_rate, config.weight_decay, config.decoupled_weight_decay);
    TemporalEnsemble ensemble;

    LossWeights weights = config.loss;
    if (!config.elr) weights.alpha = 0.0;
    if (!config.rank_loss) weights.delta = 0.0;

    TrainHistory history;
    std::optional<MlpParams> best_params;
    std::optional<AdamState> best_adam;
    int best_epoch = 0;
    double best_score = std::numeric_limits<double>::infinity();
    const bool maximize = config.val_metric == "c_index";

    const std::size_t n_train = base.size();

    for (int k = 1; k <= config.epochs; ++k) {
        // (1) Pseudo-label a scheduled fraction of the originally censored
        // samples using a no-gradient pass of the current model.
        double ratio = 0.0;
        std::size_t pseudo_count = 0;
        std::vector<Sample> epoch_samples = base;
        if (config.pseudo_labels && !censored_ids.empty()) {
            ratio = schedule_ratio(k, config.epochs);
            Rng pseudo_rng(derive_seed(config.seed, kPseudoStream, static_cast<std::uint64_t>(k)));
            const std::vector<std::string> selected = select_pseudo_set(censored_ids, ratio, pseudo_rng);
            pseudo_count = selected.size();
            std::unordered_set<std::string> chosen(selected.begin(), selected.end());
            for (std::size_t idx : censored_indices) {
                if (chosen.count(base[idx].id) == 0) continue;
                const std::vector<double> logits = forward(params, base[idx].features);
                epoch_samples[idx] = relabel(base[idx], logits_to_time(logits, work_schedule));
            }
        }

        // (2) Epoch-seeded shuffle.
        std::vector<std::size_t> order(n_train);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng shuffle_rng(derive_seed(config.seed, kShuffleStream, static_cast<std::uint64_t>(k)));
        shuffle_rng.shuffle(order);

        // (3) Minibatch loop.
        double sum_total = 0.0, sum_mse = 0.0, sum_elr = 0.0, sum_pen = 0.0, sum_rank = 0.0;
        for (std::size_t start = 0; start < n_train; start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop = std::min(n_train, start + static_cast<std::size_t>(config.batch_size));
            const std::size_t bsize = stop - start;

            std::vector<ForwardCache> caches(bsize);
            std::vector<std::vector<double>> logits(bsize);
            std::vector<BatchItem> items(bsize);
            for (std::size_t b = 0; b < bsize; ++b) {
                const Sample& s = epoch_samples[order[start + b]];
                logits[b] = forward(params, s.features, &caches[b]);
                items[b] = BatchItem{&s, logits[b]};
            }

            const BatchLossResult result = batch_loss(items, ensemble, work_schedule, weights);
            if (const char* term = first_non_finite_term(result)) {
                throw NumericError("training diverged: " + std::string(term) + " loss is non-finite at epoch " +
                                   std::to_string(k) + ", batch " +
                                   std::to_string(start / static_cast<std::size_t>(config.batch_size) + 1));
            }

            const double bweight = static_cast<double>(bsize);
            sum_total += result.total * bweight;
            sum_mse += result.ca_mse_term * bweight;
            sum_elr += result.elr_term * bweight;
            sum_pen += result.pen_term * bweight;
            sum_rank += result.rank_term * bweight;

            MlpGrads grads = MlpGrads::zeros_like(params);
            for (std::size_t b = 0; b < bsize; ++b) {
                accumulate_backward(params, caches[b], result.dlogits[b], grads);
            }
            adam_step(params, grads, adam);

            if (config.elr) {
                for (std::size_t b = 0; b < bsize; ++b) {
                    ensemble.update(items[b].sample->id, logits[b], weights.psi);
                }
            }
        }

        // (4) Validate on the original labels and keep the best epoch.
        std::vector<PredRecord> val_preds;
        val_preds.reserve(val_set.samples.size());
        for (const auto& s : val_set.samples) {
            const std::vector<double> logits = forward(params, s.features);
            const double t_hat = logits_to_time(logits, work_schedule) / scale;
            val_preds.push_back(PredRecord{t_hat, s.y, s.e, s.patient_id});
        }
        const MetricsReport report = compute_metrics(val_preds);

        EpochRecord record;
        record.epoch = k;
        record.pseudo_ratio = ratio;
        record.pseudo_count = static_cast<long long>(pseudo_count);
        const double inv_n = 1.0 / static_cast<double>(n_train);
        record.loss_total = sum_total * inv_n;
        record.loss_ca_mse = sum_mse * inv_n;
        record.loss_elr = sum_elr * inv_n;
        record.loss_pen = sum_pen * inv_n;
        record.loss_rank = sum_rank * inv_n;
        record.val_censored_mae = report.patient.censored_mae;
        record.val_c_index = report.patient.c_index.value_or(std::numeric_limits<double>::quiet_NaN());
        history.epochs.push_back(record);

        double score = std::numeric_limits<double>::infinity();
        if (config.val_metric == "censored_mae") {
            score = report.patient.censored_mae;
        } else if (config.val_metric == "uncensored_mae") {
            score = report.patient.uncensored_mae.value_or(std::numeric_limits<double>::infinity());
        } else {
            score = report.patient.c_index.has_value() ? -*report.patient.c_index
                                                       : std::numeric_limits<double>::infinity();
        }
        (void)maximize;
        if (best_epoch == 0 || score < best_score) {
            best_score = score;
            best_epoch = k;
            best_params = params;
            best_adam = adam;
        }
    }

    Checkpoint best{std::move(*best_params), std::move(*best_adam), raw_schedule,
                    scale, best_epoch, config.fingerprint()};
    return TrainResult{std::move(best), std::move(history)};
}

std::vector<PredRecord> predict(const Checkpoint& checkpoint, const Dataset& dataset) {
    dataset.validate();
    if (dataset.feature_dim != checkpoint.params.input_dim()) {
        throw DimensionError("predict: dataset has feature dimension " + std::to_string(dataset.feature_dim) +
                             " but the model expects " + std::to_string(checkpoint.params.input_dim()));
    }
    if (checkpoint.schedule.n_bins() != checkpoint.params.output_dim()) {
        throw DimensionError("predict: checkpoint schedule has " + std::to_string(checkpoint.schedule.n_bins()) +
                             " bins but the model outputs " + std::to_string(checkpoint.params.output_dim()) +
                             " logits");
    }
    const BinSchedule work_schedule = scale_schedule(checkpoint.schedule, checkpoint.label_scale);
    std::vector<PredRecord> preds;
    preds.reserve(dataset.samples.size());
    for (const auto& s : dataset.samples) {
        const std::vector<double> logits = forward(checkpoint.params, s.features);
        const double t_hat = logits_to_time(logits, work_schedule) / checkpoint.label_scale;
        preds.push_back(PredRecord{t_hat, s.y, s.e, s.patient_id});
    }
    return preds;
}

MetricsReport evaluate(const Checkpoint& checkpoint, const Dataset& dataset) {
    const std::vector<PredRecord> preds = predict(checkpoint, dataset);
    return compute_metrics(preds);
}

} // namespace casreg
