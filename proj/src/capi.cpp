#include "casreg.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "casreg/config.hpp"
#include "casreg/core.hpp"
#include "casreg/data.hpp"
#include "casreg/errors.hpp"
#include "casreg/trainer.hpp"

struct casreg_dataset {
    casreg::Dataset value;
};

struct casreg_schedule {
    casreg::BinSchedule value;
};

struct casreg_checkpoint {
    casreg::Checkpoint value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) {
    g_last_error = msg;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
casreg_status wrap(Fn&& fn) noexcept {
    try {
        fn();
        return CASREG_OK;
    } catch (const casreg::DimensionError& e) {
        set_error(e.what());
        return CASREG_ERR_DIMENSION;
    } catch (const casreg::DataError& e) {
        set_error(e.what());
        return CASREG_ERR_DATA;
    } catch (const casreg::ParseError& e) {
        set_error(e.what());
        return CASREG_ERR_PARSE;
    } catch (const casreg::IoError& e) {
        set_error(e.what());
        return CASREG_ERR_IO;
    } catch (const casreg::NumericError& e) {
        set_error(e.what());
        return CASREG_ERR_NUMERIC;
    } catch (const casreg::InvalidArgument& e) {
        set_error(e.what());
        return CASREG_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CASREG_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return CASREG_ERR_INTERNAL;
    }
}

casreg_status fail_invalid(const char* msg) {
    set_error(msg);
    return CASREG_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* casreg_version(void) {
    return "0.1.0";
}

const char* casreg_status_name(casreg_status status) {
    switch (status) {
        case CASREG_OK: return "ok";
        case CASREG_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case CASREG_ERR_DIMENSION: return "dimension_error";
        case CASREG_ERR_DATA: return "data_error";
        case CASREG_ERR_PARSE: return "parse_error";
        case CASREG_ERR_IO: return "io_error";
        case CASREG_ERR_NUMERIC: return "numeric_error";
        case CASREG_ERR_INTERNAL: return "internal_error";
    }
    return "unknown_status";
}

const char* casreg_last_error(void) {
    return g_last_error.c_str();
}

void casreg_string_free(char* str) {
    std::free(str);
}

casreg_status casreg_dataset_load_csv(const char* path, casreg_dataset** out) {
    if (path == nullptr || out == nullptr) return fail_invalid("casreg_dataset_load_csv: NULL argument");
    return wrap([&] { *out = new casreg_dataset{casreg::load_csv(path)}; });
}

casreg_status casreg_dataset_save_csv(const casreg_dataset* dataset, const char* path) {
    if (dataset == nullptr || path == nullptr) return fail_invalid("casreg_dataset_save_csv: NULL argument");
    return wrap([&] { casreg::save_csv(dataset->value, path); });
}

casreg_status casreg_dataset_generate(const char* spec_json, casreg_dataset** out) {
    if (spec_json == nullptr || out == nullptr) return fail_invalid("casreg_dataset_generate: NULL argument");
    return wrap([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec_json);
        } catch (const nlohmann::json::exception& e) {
            throw casreg::ParseError(std::string("synth spec is not valid JSON: ") + e.what());
        }
        const casreg::SynthSpec spec = casreg::SynthSpec::from_json(j);
        *out = new casreg_dataset{casreg::generate_synthetic(spec)};
    });
}

casreg_status casreg_dataset_simulate_censoring(const casreg_dataset* dataset, double rho, uint64_t seed,
                                                casreg_dataset** out) {
    if (dataset == nullptr || out == nullptr) return fail_invalid("casreg_dataset_simulate_censoring: NULL argument");
    return wrap([&] { *out = new casreg_dataset{casreg::simulate_censoring(dataset->value, rho, seed)}; });
}

casreg_status casreg_dataset_split(const casreg_dataset* dataset, double train_frac, double val_frac,
                                   double test_frac, uint64_t seed, casreg_dataset** train_out,
                                   casreg_dataset** val_out, casreg_dataset** test_out) {
    if (dataset == nullptr || train_out == nullptr || val_out == nullptr || test_out == nullptr) {
        return fail_invalid("casreg_dataset_split: NULL argument");
    }
    return wrap([&] {
        auto parts = casreg::split_patient_wise(dataset->value, {train_frac, val_frac, test_frac}, seed);
        *train_out = new casreg_dataset{std::move(parts[0])};
        *val_out = new casreg_dataset{std::move(parts[1])};
        *test_out = new casreg_dataset{std::move(parts[2])};
    });
}

int64_t casreg_dataset_n_samples(const casreg_dataset* dataset) {
    return dataset == nullptr ? -1 : static_cast<int64_t>(dataset->value.samples.size());
}

int64_t casreg_dataset_n_patients(const casreg_dataset* dataset) {
    return dataset == nullptr ? -1 : static_cast<int64_t>(dataset->value.patient_ids().size());
}

int64_t casreg_dataset_n_censored(const casreg_dataset* dataset) {
    return dataset == nullptr ? -1 : dataset->value.n_censored();
}

int64_t casreg_dataset_feature_dim(const casreg_dataset* dataset) {
    return dataset == nullptr ? -1 : dataset->value.feature_dim;
}

void casreg_dataset_free(casreg_dataset* dataset) {
    delete dataset;
}

casreg_status casreg_bin_plan(const casreg_dataset* dataset, int32_t n_bins, casreg_schedule** out) {
    if (dataset == nullptr || out == nullptr) return fail_invalid("casreg_bin_plan: NULL argument");
    return wrap([&] {
        std::vector<double> times;
        times.reserve(dataset->value.samples.size());
        for (const auto& s : dataset->value.samples) times.push_back(s.y);
        *out = new casreg_schedule{casreg::bin_plan(std::move(times), n_bins)};
    });
}

casreg_status casreg_schedule_from_json(const char* json, casreg_schedule** out) {
    if (json == nullptr || out == nullptr) return fail_invalid("casreg_schedule_from_json: NULL argument");
    return wrap([&] {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception& e) {
            throw casreg::ParseError(std::string("schedule is not valid JSON: ") + e.what());
        }
        *out = new casreg_schedule{casreg::BinSchedule::from_json(j)};
    });
}

casreg_status casreg_schedule_to_json(const casreg_schedule* schedule, char** json_out) {
    if (schedule == nullptr || json_out == nullptr) return fail_invalid("casreg_schedule_to_json: NULL argument");
    return wrap([&] { *json_out = dup_string(schedule->value.to_json().dump()); });
}

void casreg_schedule_free(casreg_schedule* schedule) {
    delete schedule;
}

casreg_status casreg_train(const casreg_dataset* train_set, const casreg_dataset* val_set, const char* config_json,
                           const casreg_schedule* schedule, casreg_checkpoint** out, char** history_csv_out) {
    if (train_set == nullptr || val_set == nullptr || config_json == nullptr || out == nullptr) {
        return fail_invalid("casreg_train: NULL argument");
    }
    return wrap([&] {
        const casreg::ExperimentConfig config = casreg::ExperimentConfig::from_string(config_json);
        std::optional<casreg::BinSchedule> plan;
        if (schedule != nullptr) {
            plan = schedule->value;
        }
        casreg::TrainResult result = casreg::train(train_set->value, val_set->value, config.train, plan);
        if (history_csv_out != nullptr) {
            *history_csv_out = dup_string(result.history.to_csv());
        }
        *out = new casreg_checkpoint{std::move(result.best)};
    });
}

casreg_status casreg_checkpoint_save(const casreg_checkpoint* checkpoint, const char* path) {
    if (checkpoint == nullptr || path == nullptr) return fail_invalid("casreg_checkpoint_save: NULL argument");
    return wrap([&] { checkpoint->value.save(path); });
}

casreg_status casreg_checkpoint_load(const char* path, casreg_checkpoint** out) {
    if (path == nullptr || out == nullptr) return fail_invalid("casreg_checkpoint_load: NULL argument");
    return wrap([&] { *out = new casreg_checkpoint{casreg::Checkpoint::load(path)}; });
}

casreg_status casreg_evaluate(const casreg_checkpoint* checkpoint, const casreg_dataset* dataset,
                              char** metrics_json_out) {
    if (checkpoint == nullptr || dataset == nullptr || metrics_json_out == nullptr) {
        return fail_invalid("casreg_evaluate: NULL argument");
    }
    return wrap([&] {
        const casreg::MetricsReport report = casreg::evaluate(checkpoint->value, dataset->value);
        *metrics_json_out = dup_string(report.to_json().dump(2));
    });
}

void casreg_checkpoint_free(casreg_checkpoint* checkpoint) {
    delete checkpoint;
}

casreg_status casreg_config_normalize(const char* config_json, char** normalized_json_out) {
    if (config_json == nullptr || normalized_json_out == nullptr) {
        return fail_invalid("casreg_config_normalize: NULL argument");
    }
    return wrap([&] {
        const casreg::ExperimentConfig config = casreg::ExperimentConfig::from_string(config_json);
        *normalized_json_out = dup_string(config.to_json().dump(2));
    });
}

} // extern "C"
