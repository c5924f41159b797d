#include "casreg/metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "casreg/errors.hpp"

namespace casreg {

double censored_mae(std::span<const PredRecord> preds) {
    if (preds.empty()) {
        throw InvalidArgument("censored_mae: empty input");
    }
    double sum = 0.0;
    for (const auto& p : preds) {
        const double err = std::abs(p.t_hat - p.y);
        if (p.t_hat < p.y) {
            sum += err;
        } else {
            sum += static_cast<double>(1 - p.e) * err;
        }
    }
    return sum / static_cast<double>(preds.size());
}

std::optional<double> uncensored_mae(std::span<const PredRecord> preds) {
    double sum = 0.0;
    long long count = 0;
    for (const auto& p : preds) {
        if (p.e == 0) {
            sum += std::abs(p.t_hat - p.y);
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(count);
}

std::optional<double> c_index(std::span<const PredRecord> preds) {
    if (preds.empty()) {
        throw InvalidArgument("c_index: empty input");
    }
    long long concordant = 0;
    long long tied = 0;
    long long comparable = 0;
    const std::size_t n = preds.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (preds[i].e != 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(preds[i].y < preds[j].y)) continue;
            ++comparable;
            if (preds[i].t_hat < preds[j].t_hat) {
                ++concordant;
            } else if (preds[i].t_hat == preds[j].t_hat) {
                ++tied;
            }
        }
    }
    if (comparable == 0) {
        return std::nullopt;
    }
    return (static_cast<double>(concordant) + 0.5 * static_cast<double>(tied)) / static_cast<double>(comparable);
}

std::vector<PredRecord> aggregate_by_patient(std::span<const PredRecord> preds) {
    std::vector<PredRecord> out;
    std::unordered_map<std::string, std::size_t> index;  // patient -> slot in `out`
    std::vector<long long> counts;
    for (const auto& p : preds) {
        auto it = index.find(p.patient_id);
        if (it == index.end()) {
            index.emplace(p.patient_id, out.size());
            out.push_back(p);
            counts.push_back(1);
        } else {
            PredRecord& agg = out[it->second];
            if (agg.y != p.y || agg.e != p.e) {
                throw DataError("aggregate_by_patient: patient '" + p.patient_id +
                                "' carries inconsistent (y, e) across samples");
            }
            agg.t_hat += p.t_hat;
            counts[it->second] += 1;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].t_hat /= static_cast<double>(counts[i]);
    }
    return out;
}

nlohmann::json MetricsReport::to_json() const {
    auto level_json = [](const MetricsLevel& level) {
        nlohmann::json j;
        j["censored_mae"] = level.censored_mae;
        j["uncensored_mae"] = level.uncensored_mae.has_value() ? nlohmann::json(*level.uncensored_mae)
                                                               : nlohmann::json(nullptr);
        j["c_index"] = level.c_index.has_value() ? nlohmann::json(*level.c_index) : nlohmann::json(nullptr);
        return j;
    };
    nlohmann::json j;
    j["n_samples"] = n_samples;
    j["n_patients"] = n_patients;
    j["n_uncensored"] = n_uncensored;
    j["sample"] = level_json(sample);
    j["patient"] = level_json(patient);
    return j;
}

MetricsReport compute_metrics(std::span<const PredRecord> preds) {
    if (preds.empty()) {
        throw InvalidArgument("compute_metrics: empty input");
    }
    const std::vector<PredRecord> by_patient = aggregate_by_patient(preds);

    MetricsReport report;
    report.n_samples = static_cast<long long>(preds.size());
    report.n_patients = static_cast<long long>(by_patient.size());
    for (const auto& p : preds) {
        if (p.e == 0) ++report.n_uncensored;
    }
    report.sample.censored_mae = censored_mae(preds);
    report.sample.uncensored_mae = uncensored_mae(preds);
    report.sample.c_index = c_index(preds);
    report.patient.censored_mae = censored_mae(by_patient);
    report.patient.uncensored_mae = uncensored_mae(by_patient);
    report.patient.c_index = c_index(by_patient);
    return report;
}

} // namespace casreg
