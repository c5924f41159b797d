#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace casreg {

// One evaluated sample: prediction, observed time, censor flag, grouping key.
struct PredRecord {
    double t_hat = 0.0;
    double y = 0.0;
    int e = 0;
    std::string patient_id;
};

// Censoring-aware mean absolute error: under-predictions always count,
// over-predictions only count for uncensored samples.
double censored_mae(std::span<const PredRecord> preds);

// Plain MAE restricted to uncensored samples; empty when there are none.
std::optional<double> uncensored_mae(std::span<const PredRecord> preds);

// Harrell's concordance index. A pair (i, j) is comparable when y_i < y_j
// and sample i is uncensored; prediction ties score 0.5, time ties are
// excluded. Empty when no pair is comparable.
std::optional<double> c_index(std::span<const PredRecord> preds);

// One record per patient with the mean prediction over that patient's
// samples. Every sample of a patient must carry identical (y, e).
std::vector<PredRecord> aggregate_by_patient(std::span<const PredRecord> preds);

struct MetricsLevel {
    double censored_mae = 0.0;
    std::optional<double> uncensored_mae;
    std::optional<double> c_index;
};

// Sample-level and patient-level metrics side by side. The patient level is
// the headline; the sample level is kept for debugging.
struct MetricsReport {
    MetricsLevel sample;
    MetricsLevel patient;
    long long n_samples = 0;
    long long n_patients = 0;
    long long n_uncensored = 0;

    // Absent metrics serialize as explicit nulls.
    nlohmann::json to_json() const;
};

MetricsReport compute_metrics(std::span<const PredRecord> preds);

} // namespace casreg
