#include "casreg/config.hpp"

#include "casreg/errors.hpp"

namespace casreg {

namespace {

void expect_object(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ParseError("config: '" + path + "' must be a JSON object");
    }
}

template <typename T>
T get_as(const nlohmann::json& value, const std::string& path) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("config: '" + path + "' has the wrong type");
    }
}

void parse_data(const nlohmann::json& j, DataConfig& out) {
    expect_object(j, "data");
    bool have_split_sum = false;
    SplitFractions fractions;
    for (const auto& [key, value] : j.items()) {
        if (key == "csv") {
            out.csv = get_as<std::string>(value, "data.csv");
            out.use_csv = true;
        } else if (key == "synth") {
            try {
                out.synth = SynthSpec::from_json(value);
            } catch (const ParseError& e) {
                throw ParseError("config: data.synth: " + std::string(e.what()));
            }
        } else if (key == "split") {
            expect_object(value, "data.split");
            for (const auto& [skey, svalue] : value.items()) {
                if (skey == "train") fractions.train = get_as<double>(svalue, "data.split.train");
                else if (skey == "val") fractions.val = get_as<double>(svalue, "data.split.val");
                else if (skey == "test") fractions.test = get_as<double>(svalue, "data.split.test");
                else throw ParseError("config: unknown key 'data.split." + skey + "'");
            }
            have_split_sum = true;
        } else if (key == "split_seed") {
            out.split_seed = get_as<std::uint64_t>(value, "data.split_seed");
        } else {
            throw ParseError("config: unknown key 'data." + key + "'");
        }
    }
    if (out.use_csv && j.contains("synth")) {
        throw ParseError("config: data.csv and data.synth are mutually exclusive");
    }
    if (have_split_sum) {
        fractions.validate();
        out.split = fractions;
    }
}

void parse_model(const nlohmann::json& j, TrainConfig& out) {
    expect_object(j, "model");
    for (const auto& [key, value] : j.items()) {
        if (key == "hidden") {
            out.hidden = get_as<std::vector<int>>(value, "model.hidden");
        } else {
            throw ParseError("config: unknown key 'model." + key + "'");
        }
    }
}

void parse_loss(const nlohmann::json& j, LossWeights& out) {
    expect_object(j, "loss");
    for (const auto& [key, value] : j.items()) {
        if (key == "alpha") out.alpha = get_as<double>(value, "loss.alpha");
        else if (key == "beta") out.beta = get_as<double>(value, "loss.beta");
        else if (key == "delta") out.delta = get_as<double>(value, "loss.delta");
        else if (key == "tau") out.tau = get_as<double>(value, "loss.tau");
        else if (key == "psi") out.psi = get_as<double>(value, "loss.psi");
        else if (key == "elr_eps") out.elr_eps = get_as<double>(value, "loss.elr_eps");
        else throw ParseError("config: unknown key 'loss." + key + "'");
    }
}

void parse_train(const nlohmann::json& j, TrainConfig& out) {
    expect_object(j, "train");
    for (const auto& [key, value] : j.items()) {
        if (key == "epochs") out.epochs = get_as<int>(value, "train.epochs");
        else if (key == "batch_size") out.batch_size = get_as<int>(value, "train.batch_size");
        else if (key == "learning_rate") out.learning_rate = get_as<double>(value, "train.learning_rate");
        else if (key == "n_bins") out.n_bins = get_as<int>(value, "train.n_bins");
        else if (key == "seed") out.seed = get_as<std::uint64_t>(value, "train.seed");
        else if (key == "pseudo_labels") out.pseudo_labels = get_as<bool>(value, "train.pseudo_labels");
        else if (key == "rank_loss") out.rank_loss = get_as<bool>(value, "train.rank_loss");
        else if (key == "elr") out.elr = get_as<bool>(value, "train.elr");
        else if (key == "label_scale") out.label_scale = get_as<double>(value, "train.label_scale");
        else if (key == "weight_decay") out.weight_decay = get_as<double>(value, "train.weight_decay");
        else if (key == "decoupled_weight_decay")
            out.decoupled_weight_decay = get_as<bool>(value, "train.decoupled_weight_decay");
        else if (key == "val_metric") out.val_metric = get_as<std::string>(value, "train.val_metric");
        else throw ParseError("config: unknown key 'train." + key + "'");
    }
}

void parse_output(const nlohmann::json& j, std::string& out_dir) {
    expect_object(j, "output");
    for (const auto& [key, value] : j.items()) {
        if (key == "dir") {
            out_dir = get_as<std::string>(value, "output.dir");
        } else {
            throw ParseError("config: unknown key 'output." + key + "'");
        }
    }
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    expect_object(j, "<root>");
    ExperimentConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "data") parse_data(value, config.data);
        else if (key == "model") parse_model(value, config.train);
        else if (key == "loss") parse_loss(value, config.train.loss);
        else if (key == "train") parse_train(value, config.train);
        else if (key == "output") parse_output(value, config.output_dir);
        else throw ParseError("config: unknown section '" + key + "'");
    }
    config.train.validate();
    config.data.split.validate();
    config.data.synth.validate();
    return config;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json data = nlohmann::json::object();
    if (this->data.use_csv) {
        data["csv"] = *this->data.csv;
    } else {
        data["synth"] = this->data.synth.to_json();
    }
    data["split"] = nlohmann::json{{"train", this->data.split.train},
                                   {"val", this->data.split.val},
                                   {"test", this->data.split.test}};
    if (this->data.split_seed.has_value()) {
        data["split_seed"] = *this->data.split_seed;
    }

    const nlohmann::json train_flat = train.to_json();
    nlohmann::json train_section = train_flat;
    train_section.erase("hidden");
    train_section.erase("alpha");
    train_section.erase("beta");
    train_section.erase("delta");
    train_section.erase("tau");
    train_section.erase("psi");
    train_section.erase("elr_eps");

    return nlohmann::json{{"data", data},
                          {"model", nlohmann::json{{"hidden", train.hidden}}},
                          {"loss", nlohmann::json{{"alpha", train.loss.alpha},
                                                  {"beta", train.loss.beta},
                                                  {"delta", train.loss.delta},
                                                  {"tau", train.loss.tau},
                                                  {"psi", train.loss.psi},
                                                  {"elr_eps", train.loss.elr_eps}}},
                          {"train", train_section},
                          {"output", nlohmann::json{{"dir", output_dir}}}};
}

} // namespace casreg
