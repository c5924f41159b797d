#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "casreg/config.hpp"
#include "casreg/errors.hpp"

using namespace casreg;

TEST_CASE("config: the empty object is a full default config") {
    const ExperimentConfig config = ExperimentConfig::from_string("{}");
    CHECK(config.train.epochs == 40);
    CHECK(config.train.batch_size == 32);
    CHECK(config.train.loss.tau == 0.5);
    CHECK(config.train.loss.beta == 1e6);
    CHECK(config.train.loss.alpha == 100.0);
    CHECK(config.train.loss.psi == 0.5);
    CHECK(config.train.loss.delta == 1.0);
    CHECK(config.train.n_bins == 5);
    CHECK(config.train.hidden == std::vector<int>{64, 64});
    CHECK(config.train.pseudo_labels);
    CHECK(config.train.rank_loss);
    CHECK(config.train.elr);
    CHECK(config.train.label_scale == 1.0);
    CHECK(config.output_dir == "out");
    CHECK_FALSE(config.data.use_csv);
}

TEST_CASE("config: sections override their fields") {
    const std::string text = R"({
        "data": {"synth": {"n_patients": 100, "censor_prob": 0.5}, "split": {"train": 0.6, "val": 0.2, "test": 0.2}},
        "model": {"hidden": [32]},
        "loss": {"alpha": 10.0, "tau": 0.25},
        "train": {"epochs": 3, "seed": 42, "rank_loss": false},
        "output": {"dir": "runs/exp1"}
    })";
    const ExperimentConfig config = ExperimentConfig::from_string(text);
    CHECK(config.data.synth.n_patients == 100);
    CHECK(config.data.synth.censor_prob == 0.5);
    CHECK(config.data.split.train == 0.6);
    CHECK(config.train.hidden == std::vector<int>{32});
    CHECK(config.train.loss.alpha == 10.0);
    CHECK(config.train.loss.tau == 0.25);
    CHECK(config.train.epochs == 3);
    CHECK(config.train.seed == 42);
    CHECK_FALSE(config.train.rank_loss);
    CHECK(config.output_dir == "runs/exp1");
}

TEST_CASE("config: unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_string(R"({"trian": {}})"), doctest::Contains("trian"), ParseError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_string(R"({"train": {"epoch": 3}})"), doctest::Contains("train.epoch"),
                         ParseError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_string(R"({"loss": {"gamma": 3}})"), doctest::Contains("loss.gamma"),
                         ParseError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_string(R"({"data": {"synth": {"n": 3}}})"), doctest::Contains("'n'"),
                         ParseError);
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_string(R"({"data": {"split": {"holdout": 0.1}}})"),
                         doctest::Contains("split.holdout"), ParseError);
}

TEST_CASE("config: invalid values are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_string(R"({"train": {"epochs": 0}})"), InvalidArgument);
    CHECK_THROWS_AS(ExperimentConfig::from_string(R"({"loss": {"tau": 1.5}})"), InvalidArgument);
    CHECK_THROWS_AS(ExperimentConfig::from_string(R"({"data": {"split": {"train": 0.9, "val": 0.3, "test": 0.3}}})"),
                    InvalidArgument);
    CHECK_THROWS_AS(ExperimentConfig::from_string("not json at all"), ParseError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_string(R"({"data": {"csv": "x.csv", "synth": {"n_patients": 3}}})"),
        ParseError);
}

TEST_CASE("config: canonical round trip") {
    const std::string text = R"({
        "data": {"csv": "data/train.csv"},
        "train": {"epochs": 7, "seed": 3}
    })";
    const ExperimentConfig config = ExperimentConfig::from_string(text);
    const nlohmann::json canonical = config.to_json();
    const ExperimentConfig back = ExperimentConfig::from_json(canonical);
    CHECK(back.to_json() == canonical);
    CHECK(back.data.use_csv);
    CHECK(*back.data.csv == "data/train.csv");
    CHECK(back.train.epochs == 7);

    // The fingerprint is stable across identical configs.
    CHECK(config.train.fingerprint() == back.train.fingerprint());
}
