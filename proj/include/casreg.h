/*
 * casreg — censor-aware survival time regression, C interface.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Every fallible call returns a casreg_status; on failure the handle
 * outputs are left untouched and casreg_last_error() describes the problem
 * for the calling thread. Strings returned through char** outputs are
 * allocated by the library and must be released with casreg_string_free().
 */
#ifndef CASREG_H
#define CASREG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CASREG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CASREG_API __attribute__((visibility("default")))
#else
#define CASREG_API
#endif

typedef struct casreg_dataset casreg_dataset;
typedef struct casreg_schedule casreg_schedule;
typedef struct casreg_checkpoint casreg_checkpoint;

typedef enum casreg_status {
    CASREG_OK = 0,
    CASREG_ERR_INVALID_ARGUMENT = 1,
    CASREG_ERR_DIMENSION = 2,
    CASREG_ERR_DATA = 3,
    CASREG_ERR_PARSE = 4,
    CASREG_ERR_IO = 5,
    CASREG_ERR_NUMERIC = 6,
    CASREG_ERR_INTERNAL = 7
} casreg_status;

CASREG_API const char* casreg_version(void);
CASREG_API const char* casreg_status_name(casreg_status status);

/* Message of the most recent failure on the calling thread. Never NULL;
 * valid until the next failing casreg call on this thread. */
CASREG_API const char* casreg_last_error(void);

CASREG_API void casreg_string_free(char* str);

/* ------------------------------------------------------------------ */
/* datasets                                                           */

/* CSV schema: header `id,patient_id,y,e,f0,...,f{d-1}`. */
CASREG_API casreg_status casreg_dataset_load_csv(const char* path, casreg_dataset** out);
CASREG_API casreg_status casreg_dataset_save_csv(const casreg_dataset* dataset, const char* path);

/* spec_json: {"n_patients", "samples_per_patient", "dim", "censor_prob",
 * "noise", "t_max", "weibull_shape", "risk_scale", "seed"} — all optional. */
CASREG_API casreg_status casreg_dataset_generate(const char* spec_json, casreg_dataset** out);

/* Converts round(rho * n_uncensored_patients) uncensored patients into
 * censored ones with a uniform censor time strictly below their event
 * time. */
CASREG_API casreg_status casreg_dataset_simulate_censoring(const casreg_dataset* dataset, double rho,
                                                           uint64_t seed, casreg_dataset** out);

/* Patient-wise split into three disjoint parts. */
CASREG_API casreg_status casreg_dataset_split(const casreg_dataset* dataset, double train_frac, double val_frac,
                                              double test_frac, uint64_t seed, casreg_dataset** train_out,
                                              casreg_dataset** val_out, casreg_dataset** test_out);

CASREG_API int64_t casreg_dataset_n_samples(const casreg_dataset* dataset);
CASREG_API int64_t casreg_dataset_n_patients(const casreg_dataset* dataset);
CASREG_API int64_t casreg_dataset_n_censored(const casreg_dataset* dataset);
CASREG_API int64_t casreg_dataset_feature_dim(const casreg_dataset* dataset);
CASREG_API void casreg_dataset_free(casreg_dataset* dataset);

/* ------------------------------------------------------------------ */
/* bin schedules                                                      */

/* Balanced discretization of the dataset's observed times. */
CASREG_API casreg_status casreg_bin_plan(const casreg_dataset* dataset, int32_t n_bins, casreg_schedule** out);

/* {"bins": [days...], "total": days} */
CASREG_API casreg_status casreg_schedule_from_json(const char* json, casreg_schedule** out);
CASREG_API casreg_status casreg_schedule_to_json(const casreg_schedule* schedule, char** json_out);
CASREG_API void casreg_schedule_free(casreg_schedule* schedule);

/* ------------------------------------------------------------------ */
/* training and evaluation                                            */

/* config_json: full experiment config with the sections data/model/loss/
 * train/output; only model/loss/train are read here, unknown keys anywhere
 * are rejected. `schedule` may be NULL, in which case the bin plan is
 * computed from the training split. `history_csv_out` may be NULL. */
CASREG_API casreg_status casreg_train(const casreg_dataset* train_set, const casreg_dataset* val_set,
                                      const char* config_json, const casreg_schedule* schedule,
                                      casreg_checkpoint** out, char** history_csv_out);

CASREG_API casreg_status casreg_checkpoint_save(const casreg_checkpoint* checkpoint, const char* path);
CASREG_API casreg_status casreg_checkpoint_load(const char* path, casreg_checkpoint** out);

/* Metrics JSON: {"n_samples", "n_patients", "n_uncensored",
 * "sample": {...}, "patient": {...}} with explicit nulls for metrics that
 * are undefined on the given data. */
CASREG_API casreg_status casreg_evaluate(const casreg_checkpoint* checkpoint, const casreg_dataset* dataset,
                                         char** metrics_json_out);
CASREG_API void casreg_checkpoint_free(casreg_checkpoint* checkpoint);

/* ------------------------------------------------------------------ */
/* configuration                                                      */

/* Validates a config document and returns the canonical form with every
 * default filled in. */
CASREG_API casreg_status casreg_config_normalize(const char* config_json, char** normalized_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CASREG_H */
