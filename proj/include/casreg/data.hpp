#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "casreg/core.hpp"

namespace casreg {

// A list of samples with a uniform feature width. Samples of one patient
// must share (y, e).
struct Dataset {
    std::vector<Sample> samples;
    int feature_dim = 0;
    std::string provenance;

    // Throws DataError / InvalidArgument when any structural invariant fails.
    void validate() const;

    // Unique patient ids in order of first appearance.
    std::vector<std::string> patient_ids() const;

    long long n_censored() const;
    long long n_uncensored() const;
};

// CSV schema: header `id,patient_id,y,e,f0,...,f{d-1}`, comma separated,
// UTF-8, no quoting. `y` is a positive real in days, `e` is 0 or 1.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& dataset, const std::string& path);

// Synthetic cohort description. The hidden time model is
//   t = clamp(t_max * exp(-softplus(r)) * W, 1, t_max)
// with r = risk_scale * <w, x> for a fixed unit direction w, and W a
// unit-median Weibull draw of the given shape (weibull_shape <= 0 disables
// the draw, W = 1). With probability censor_prob the record is censored at a
// uniform time in [1, t). All samples of a patient share (y, e); `noise`
// scales the per-sample feature perturbation.
struct SynthSpec {
    long long n_patients = 600;
    int samples_per_patient = 1;
    int dim = 8;
    double censor_prob = 0.3;
    double noise = 0.1;
    double t_max = 2000.0;
    double weibull_shape = 8.0;
    double risk_scale = 2.5;
    std::uint64_t seed = 7;

    void validate() const;
    nlohmann::json to_json() const;
    static SynthSpec from_json(const nlohmann::json& j);
};

// Optional introspection filled by generate_synthetic for tests and
// diagnostics: the risk direction and each patient's true (risk, time).
struct SynthDebug {
    std::vector<double> risk_direction;
    std::vector<double> patient_risk;
    std::vector<double> patient_time;
};

Dataset generate_synthetic(const SynthSpec& spec, SynthDebug* debug = nullptr);

// Converts round(rho * n_uncensored_patients) uncensored patients to
// censored ones, replacing each patient's y with a uniform draw strictly
// below it. Censored patients are untouched; the input is not mutated.
Dataset simulate_censoring(const Dataset& dataset, double rho, std::uint64_t seed);

struct SplitFractions {
    double train = 0.7;
    double val = 0.15;
    double test = 0.15;

    void validate() const;
};

// Patient-wise split: every patient's samples land in exactly one part and
// part sizes stay within one patient of the requested fractions.
std::array<Dataset, 3> split_patient_wise(const Dataset& dataset, const SplitFractions& fractions,
                                          std::uint64_t seed);

} // namespace casreg
