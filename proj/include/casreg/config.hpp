#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "casreg/data.hpp"
#include "casreg/trainer.hpp"

namespace casreg {

// [data] section: where samples come from and how they are split. Exactly
// one of `csv` / `synth` is active; when neither is given the default
// synthetic spec is used.
struct DataConfig {
    std::optional<std::string> csv;
    SynthSpec synth;
    bool use_csv = false;
    SplitFractions split;
    std::optional<std::uint64_t> split_seed; // defaults to the training seed

    std::uint64_t effective_split_seed(std::uint64_t train_seed) const {
        return split_seed.value_or(train_seed);
    }
};

// Whole experiment description, read from a JSON file with the sections
// data / model / loss / train / output. Unknown keys anywhere are rejected
// with the offending path in the message. Every field has a default, so the
// empty object {} is a valid config.
struct ExperimentConfig {
    DataConfig data;
    TrainConfig train; // holds the model widths and loss weights too
    std::string output_dir = "out";

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_string(const std::string& text);
    nlohmann::json to_json() const;
};

} // namespace casreg
