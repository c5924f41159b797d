// Exercises the extern-C surface the way an external client would: opaque
// handles, status codes and library-owned strings only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <algorithm>
#include <string>

#include <json.hpp>

#include "casreg.h"

namespace {

struct StringGuard {
    char* ptr = nullptr;
    ~StringGuard() { casreg_string_free(ptr); }
    std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

const char* kSmallSpec = R"({"n_patients": 60, "dim": 4, "censor_prob": 0.4, "seed": 12})";

const char* kSmallConfig = R"({
    "model": {"hidden": [16]},
    "train": {"epochs": 3, "batch_size": 16, "n_bins": 3, "seed": 7}
})";

} // namespace

TEST_CASE("capi: version and status names") {
    CHECK(std::string(casreg_version()) == "0.1.0");
    CHECK(std::string(casreg_status_name(CASREG_OK)) == "ok");
    CHECK(std::string(casreg_status_name(CASREG_ERR_PARSE)) == "parse_error");
    CHECK(std::string(casreg_status_name(CASREG_ERR_DIMENSION)) == "dimension_error");
}

TEST_CASE("capi: generate, inspect, save and reload a dataset") {
    casreg_dataset* ds = nullptr;
    REQUIRE(casreg_dataset_generate(kSmallSpec, &ds) == CASREG_OK);
    CHECK(casreg_dataset_n_samples(ds) == 60);
    CHECK(casreg_dataset_n_patients(ds) == 60);
    CHECK(casreg_dataset_feature_dim(ds) == 4);
    CHECK(casreg_dataset_n_censored(ds) > 0);

    const char* path = "/tmp/casreg_capi_ds.csv";
    REQUIRE(casreg_dataset_save_csv(ds, path) == CASREG_OK);
    casreg_dataset* loaded = nullptr;
    REQUIRE(casreg_dataset_load_csv(path, &loaded) == CASREG_OK);
    CHECK(casreg_dataset_n_samples(loaded) == 60);
    CHECK(casreg_dataset_n_censored(loaded) == casreg_dataset_n_censored(ds));
    std::remove(path);

    casreg_dataset_free(loaded);
    casreg_dataset_free(ds);
}

TEST_CASE("capi: error paths set codes and messages") {
    casreg_dataset* ds = nullptr;
    CHECK(casreg_dataset_load_csv("/tmp/casreg_no_such.csv", &ds) == CASREG_ERR_IO);
    CHECK(std::string(casreg_last_error()).find("casreg_no_such.csv") != std::string::npos);
    CHECK(ds == nullptr);

    CHECK(casreg_dataset_generate("{\"bogus\": 1}", &ds) == CASREG_ERR_PARSE);
    CHECK(std::string(casreg_last_error()).find("bogus") != std::string::npos);

    CHECK(casreg_dataset_generate(nullptr, &ds) == CASREG_ERR_INVALID_ARGUMENT);
    CHECK(casreg_dataset_n_samples(nullptr) == -1);

    casreg_schedule* schedule = nullptr;
    CHECK(casreg_schedule_from_json("{\"bins\": [1], \"total\": 5}", &schedule) == CASREG_ERR_PARSE);
}

TEST_CASE("capi: bin plan round trips through JSON") {
    casreg_dataset* ds = nullptr;
    REQUIRE(casreg_dataset_generate(kSmallSpec, &ds) == CASREG_OK);

    casreg_schedule* schedule = nullptr;
    REQUIRE(casreg_bin_plan(ds, 3, &schedule) == CASREG_OK);
    StringGuard json;
    REQUIRE(casreg_schedule_to_json(schedule, &json.ptr) == CASREG_OK);

    const nlohmann::json j = nlohmann::json::parse(json.str());
    CHECK(j["bins"].size() == 3);
    double sum = 0.0;
    for (double b : j["bins"].get<std::vector<double>>()) sum += b;
    CHECK(sum == j["total"].get<double>());

    casreg_schedule* back = nullptr;
    REQUIRE(casreg_schedule_from_json(json.str().c_str(), &back) == CASREG_OK);
    StringGuard again;
    REQUIRE(casreg_schedule_to_json(back, &again.ptr) == CASREG_OK);
    CHECK(json.str() == again.str());

    casreg_schedule_free(back);
    casreg_schedule_free(schedule);
    casreg_dataset_free(ds);
}

TEST_CASE("capi: split, train, evaluate, checkpoint round trip") {
    casreg_dataset* ds = nullptr;
    REQUIRE(casreg_dataset_generate(kSmallSpec, &ds) == CASREG_OK);

    casreg_dataset* train_ds = nullptr;
    casreg_dataset* val_ds = nullptr;
    casreg_dataset* test_ds = nullptr;
    REQUIRE(casreg_dataset_split(ds, 0.6, 0.2, 0.2, 3, &train_ds, &val_ds, &test_ds) == CASREG_OK);
    CHECK(casreg_dataset_n_samples(train_ds) + casreg_dataset_n_samples(val_ds) + casreg_dataset_n_samples(test_ds) ==
          casreg_dataset_n_samples(ds));

    casreg_checkpoint* ckpt = nullptr;
    StringGuard history;
    REQUIRE(casreg_train(train_ds, val_ds, kSmallConfig, nullptr, &ckpt, &history.ptr) == CASREG_OK);
    const std::string history_csv = history.str();
    CHECK(history_csv.find("epoch,pseudo_ratio,pseudo_count") == 0);
    CHECK(std::count(history_csv.begin(), history_csv.end(), '\n') == 4); // header + 3 epochs

    StringGuard metrics;
    REQUIRE(casreg_evaluate(ckpt, test_ds, &metrics.ptr) == CASREG_OK);
    const nlohmann::json m = nlohmann::json::parse(metrics.str());
    CHECK(m.contains("patient"));
    CHECK(m["patient"]["censored_mae"].is_number());

    const char* path = "/tmp/casreg_capi_ckpt.json";
    REQUIRE(casreg_checkpoint_save(ckpt, path) == CASREG_OK);
    casreg_checkpoint* loaded = nullptr;
    REQUIRE(casreg_checkpoint_load(path, &loaded) == CASREG_OK);
    StringGuard metrics2;
    REQUIRE(casreg_evaluate(loaded, test_ds, &metrics2.ptr) == CASREG_OK);
    CHECK(metrics.str() == metrics2.str());
    std::remove(path);

    // Dimension mismatch is reported as such.
    casreg_dataset* wide = nullptr;
    REQUIRE(casreg_dataset_generate(R"({"n_patients": 10, "dim": 9, "seed": 1})", &wide) == CASREG_OK);
    StringGuard unused;
    CHECK(casreg_evaluate(ckpt, wide, &unused.ptr) == CASREG_ERR_DIMENSION);
    CHECK(std::string(casreg_last_error()).find("9") != std::string::npos);

    casreg_dataset_free(wide);
    casreg_checkpoint_free(loaded);
    casreg_checkpoint_free(ckpt);
    casreg_dataset_free(test_ds);
    casreg_dataset_free(val_ds);
    casreg_dataset_free(train_ds);
    casreg_dataset_free(ds);
}

TEST_CASE("capi: simulate censoring through the handle surface") {
    casreg_dataset* ds = nullptr;
    REQUIRE(casreg_dataset_generate(R"({"n_patients": 50, "censor_prob": 0.0, "seed": 4})", &ds) == CASREG_OK);
    CHECK(casreg_dataset_n_censored(ds) == 0);

    casreg_dataset* censored = nullptr;
    REQUIRE(casreg_dataset_simulate_censoring(ds, 0.5, 11, &censored) == CASREG_OK);
    CHECK(casreg_dataset_n_censored(censored) == 25);
    CHECK(casreg_dataset_n_censored(ds) == 0);

    casreg_dataset* bad = nullptr;
    CHECK(casreg_dataset_simulate_censoring(ds, 2.0, 11, &bad) == CASREG_ERR_INVALID_ARGUMENT);

    casreg_dataset_free(censored);
    casreg_dataset_free(ds);
}

TEST_CASE("capi: config normalization fills defaults and rejects junk") {
    StringGuard normalized;
    REQUIRE(casreg_config_normalize("{}", &normalized.ptr) == CASREG_OK);
    const nlohmann::json j = nlohmann::json::parse(normalized.str());
    CHECK(j["train"]["epochs"] == 40);
    CHECK(j["loss"]["beta"] == 1e6);
    CHECK(j["data"]["synth"]["n_patients"] == 600);

    StringGuard bad;
    CHECK(casreg_config_normalize(R"({"train": {"epochz": 1}})", &bad.ptr) == CASREG_ERR_PARSE);
    CHECK(std::string(casreg_last_error()).find("epochz") != std::string::npos);
}
