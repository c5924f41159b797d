// casreg command line: synthetic data generation, bin planning, training,
// evaluation and the censoring-ratio robustness sweep. Everything goes
// through the shared-library C API; this translation unit owns no model
// code.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "casreg.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ------------------------------------------------------------------
// Small utilities

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(casreg_status status, const std::string& context) {
    if (status != CASREG_OK) {
        throw CliError(context + ": " + casreg_last_error() + " [" + casreg_status_name(status) + "]");
    }
}

struct DatasetDeleter {
    void operator()(casreg_dataset* p) const { casreg_dataset_free(p); }
};
struct ScheduleDeleter {
    void operator()(casreg_schedule* p) const { casreg_schedule_free(p); }
};
struct CheckpointDeleter {
    void operator()(casreg_checkpoint* p) const { casreg_checkpoint_free(p); }
};
using DatasetHandle = std::unique_ptr<casreg_dataset, DatasetDeleter>;
using ScheduleHandle = std::unique_ptr<casreg_schedule, ScheduleDeleter>;
using CheckpointHandle = std::unique_ptr<casreg_checkpoint, CheckpointDeleter>;

std::string take_string(char* ptr) {
    std::string out = ptr == nullptr ? std::string() : std::string(ptr);
    casreg_string_free(ptr);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CliError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Temp-then-rename write so a crashed run never leaves half a file behind.
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw CliError("cannot open '" + tmp + "' for writing");
        }
        out << content;
        if (!out) {
            throw CliError("failed while writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw CliError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

void refuse_overwrite(const std::string& path, bool force) {
    if (!force && fs::exists(path)) {
        throw CliError("'" + path + "' already exists (pass --force to overwrite)");
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Deterministic 64-bit mixing for derived seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b * 0xd1b54a32d192ed03ULL + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ------------------------------------------------------------------
// Config handling

json load_normalized_config(const std::string& config_path) {
    const std::string raw = config_path.empty() ? std::string("{}") : read_file(config_path);
    char* normalized = nullptr;
    check(casreg_config_normalize(raw.c_str(), &normalized),
          config_path.empty() ? "default config" : "config '" + config_path + "'");
    return json::parse(take_string(normalized));
}

struct TrainOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    bool no_pseudo = false;
    bool no_rank = false;
    bool no_elr = false;
};

void apply_overrides(json& config, const TrainOverrides& overrides) {
    if (overrides.seed.has_value()) config["train"]["seed"] = *overrides.seed;
    if (overrides.output_dir.has_value()) config["output"]["dir"] = *overrides.output_dir;
    if (overrides.no_pseudo) config["train"]["pseudo_labels"] = false;
    if (overrides.no_rank) config["train"]["rank_loss"] = false;
    if (overrides.no_elr) config["train"]["elr"] = false;
}

DatasetHandle materialize_dataset(const json& data_section) {
    casreg_dataset* ds = nullptr;
    if (data_section.contains("csv")) {
        const std::string path = data_section["csv"].get<std::string>();
        check(casreg_dataset_load_csv(path.c_str(), &ds), "loading '" + path + "'");
    } else {
        const std::string spec = data_section["synth"].dump();
        check(casreg_dataset_generate(spec.c_str(), &ds), "generating synthetic data");
    }
    return DatasetHandle(ds);
}

struct SplitHandles {
    DatasetHandle train, val, test;
};

SplitHandles split_dataset(const casreg_dataset* ds, const json& config) {
    const json& split = config["data"]["split"];
    const std::uint64_t split_seed = config["data"].contains("split_seed")
                                         ? config["data"]["split_seed"].get<std::uint64_t>()
                                         : config["train"]["seed"].get<std::uint64_t>();
    casreg_dataset* train_ds = nullptr;
    casreg_dataset* val_ds = nullptr;
    casreg_dataset* test_ds = nullptr;
    check(casreg_dataset_split(ds, split["train"].get<double>(), split["val"].get<double>(),
                               split["test"].get<double>(), split_seed, &train_ds, &val_ds, &test_ds),
          "splitting dataset");
    return {DatasetHandle(train_ds), DatasetHandle(val_ds), DatasetHandle(test_ds)};
}

// ------------------------------------------------------------------
// gen-data

struct GenDataOptions {
    std::string config_path;
    std::string out_path;
    bool force = false;
    std::optional<std::uint64_t> seed;
    std::optional<long long> n_patients;
    std::optional<int> samples_per_patient;
    std::optional<int> dim;
    std::optional<double> censor_prob;
    std::optional<double> noise;
    std::optional<double> t_max;
    std::optional<double> weibull_shape;
    std::optional<double> risk_scale;
};

int run_gen_data(const GenDataOptions& opt) {
    refuse_overwrite(opt.out_path, opt.force);
    json config = load_normalized_config(opt.config_path);
    json spec = config["data"].contains("synth") ? config["data"]["synth"] : json::object();
    if (opt.seed) spec["seed"] = *opt.seed;
    if (opt.n_patients) spec["n_patients"] = *opt.n_patients;
    if (opt.samples_per_patient) spec["samples_per_patient"] = *opt.samples_per_patient;
    if (opt.dim) spec["dim"] = *opt.dim;
    if (opt.censor_prob) spec["censor_prob"] = *opt.censor_prob;
    if (opt.noise) spec["noise"] = *opt.noise;
    if (opt.t_max) spec["t_max"] = *opt.t_max;
    if (opt.weibull_shape) spec["weibull_shape"] = *opt.weibull_shape;
    if (opt.risk_scale) spec["risk_scale"] = *opt.risk_scale;

    casreg_dataset* ds = nullptr;
    check(casreg_dataset_generate(spec.dump().c_str(), &ds), "generating synthetic data");
    DatasetHandle handle(ds);
    check(casreg_dataset_save_csv(handle.get(), opt.out_path.c_str()), "writing '" + opt.out_path + "'");

    std::cerr << "wrote " << casreg_dataset_n_samples(handle.get()) << " samples ("
              << casreg_dataset_n_patients(handle.get()) << " patients, "
              << casreg_dataset_n_censored(handle.get()) << " censored) to " << opt.out_path << "\n";
    return 0;
}

// ------------------------------------------------------------------
// bin-plan

int run_bin_plan(const std::string& data_path, int n_bins) {
    casreg_dataset* ds = nullptr;
    check(casreg_dataset_load_csv(data_path.c_str(), &ds), "loading '" + data_path + "'");
    DatasetHandle dataset(ds);

    casreg_schedule* schedule = nullptr;
    check(casreg_bin_plan(dataset.get(), n_bins, &schedule), "planning bins");
    ScheduleHandle handle(schedule);

    char* out = nullptr;
    check(casreg_schedule_to_json(handle.get(), &out), "serializing schedule");
    std::cout << take_string(out) << "\n";
    return 0;
}

// ------------------------------------------------------------------
// train

struct TrainOptions {
    std::string config_path;
    std::string schedule_path;
    TrainOverrides overrides;
    bool force = false;
};

struct TrainRunOutput {
    CheckpointHandle checkpoint;
    std::string history_csv;
};

TrainRunOutput run_training(const casreg_dataset* train_ds, const casreg_dataset* val_ds, const json& config,
                            const casreg_schedule* schedule) {
    casreg_checkpoint* ckpt = nullptr;
    char* history = nullptr;
    check(casreg_train(train_ds, val_ds, config.dump().c_str(), schedule, &ckpt, &history), "training");
    return {CheckpointHandle(ckpt), take_string(history)};
}

std::string evaluate_to_json(const casreg_checkpoint* ckpt, const casreg_dataset* ds, const std::string& what) {
    char* metrics = nullptr;
    check(casreg_evaluate(ckpt, ds, &metrics), "evaluating on " + what);
    return take_string(metrics);
}

int run_train(const TrainOptions& opt) {
    json config = load_normalized_config(opt.config_path);
    apply_overrides(config, opt.overrides);

    const std::string out_dir = config["output"]["dir"].get<std::string>();
    fs::create_directories(out_dir);
    const std::string history_path = out_dir + "/history.csv";
    const std::string metrics_path = out_dir + "/metrics.json";
    const std::string checkpoint_path = out_dir + "/checkpoint.json";
    refuse_overwrite(history_path, opt.force);
    refuse_overwrite(metrics_path, opt.force);
    refuse_overwrite(checkpoint_path, opt.force);

    ScheduleHandle schedule;
    if (!opt.schedule_path.empty()) {
        casreg_schedule* s = nullptr;
        check(casreg_schedule_from_json(read_file(opt.schedule_path).c_str(), &s),
              "schedule '" + opt.schedule_path + "'");
        schedule.reset(s);
    }

    DatasetHandle dataset = materialize_dataset(config["data"]);
    SplitHandles parts = split_dataset(dataset.get(), config);

    TrainRunOutput run = run_training(parts.train.get(), parts.val.get(), config, schedule.get());

    json metrics;
    metrics["val"] = json::parse(evaluate_to_json(run.checkpoint.get(), parts.val.get(), "validation split"));
    metrics["test"] = json::parse(evaluate_to_json(run.checkpoint.get(), parts.test.get(), "test split"));

    std::vector<std::string> written;
    try {
        write_file(history_path, run.history_csv);
        written.push_back(history_path);
        write_file(metrics_path, metrics.dump(2) + "\n");
        written.push_back(metrics_path);
        check(casreg_checkpoint_save(run.checkpoint.get(), checkpoint_path.c_str()),
              "writing '" + checkpoint_path + "'");
        written.push_back(checkpoint_path);
    } catch (...) {
        for (const auto& path : written) std::remove(path.c_str());
        throw;
    }

    std::cerr << "training done; outputs in " << out_dir << "\n";
    std::cout << metrics.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------
// evaluate

int run_evaluate(const std::string& checkpoint_path, const std::string& data_path, const std::string& out_path,
                 bool as_json, bool force) {
    casreg_checkpoint* ckpt = nullptr;
    check(casreg_checkpoint_load(checkpoint_path.c_str(), &ckpt), "loading '" + checkpoint_path + "'");
    CheckpointHandle checkpoint(ckpt);

    casreg_dataset* ds = nullptr;
    check(casreg_dataset_load_csv(data_path.c_str(), &ds), "loading '" + data_path + "'");
    DatasetHandle dataset(ds);

    const std::string metrics_str = evaluate_to_json(checkpoint.get(), dataset.get(), "'" + data_path + "'");
    if (!out_path.empty()) {
        refuse_overwrite(out_path, force);
        write_file(out_path, metrics_str + "\n");
    }

    if (as_json) {
        std::cout << metrics_str << "\n";
        return 0;
    }

    const json m = json::parse(metrics_str);
    auto cell = [&](const json& level, const char* key) {
        return level[key].is_null() ? std::string("-") : format_double(level[key].get<double>());
    };
    std::cout << "metric           sample          patient\n";
    for (const char* key : {"censored_mae", "uncensored_mae", "c_index"}) {
        std::printf("%-16s %-15s %-15s\n", key, cell(m["sample"], key).c_str(), cell(m["patient"], key).c_str());
    }
    std::cout << "n_samples        " << m["n_samples"].get<long long>() << "\n";
    std::cout << "n_patients       " << m["n_patients"].get<long long>() << "\n";
    std::cout << "n_uncensored     " << m["n_uncensored"].get<long long>() << "\n";
    return 0;
}

// ------------------------------------------------------------------
// sweep-censoring

struct SweepOptions {
    std::string config_path;
    std::string out_path;
    std::vector<double> rhos{0.0, 0.25, 0.5, 0.75, 0.9};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<std::string> arms{"base", "rank", "elr", "pseudo", "pseudo+rank", "pseudo+rank+elr"};
    bool force = false;
};

struct ArmToggles {
    bool pseudo = false;
    bool rank = false;
    bool elr = false;
};

ArmToggles arm_toggles(const std::string& arm) {
    static const std::map<std::string, ArmToggles> known{
        {"base", {false, false, false}},      {"rank", {false, true, false}},
        {"elr", {false, false, true}},        {"pseudo", {true, false, false}},
        {"pseudo+rank", {true, true, false}}, {"pseudo+elr", {true, false, true}},
        {"rank+elr", {false, true, true}},    {"pseudo+rank+elr", {true, true, true}},
    };
    const auto it = known.find(arm);
    if (it == known.end()) {
        std::string names;
        for (const auto& [name, toggles] : known) {
            (void)toggles;
            names += names.empty() ? name : ", " + name;
        }
        throw CliError("unknown arm '" + arm + "' (known: " + names + ")");
    }
    return it->second;
}

struct SweepRow {
    std::string arm;
    double rho = 0.0;
    std::uint64_t seed = 0;
    double censored_mae = 0.0;
    std::optional<double> uncensored_mae;
    std::optional<double> c_index;
};

int run_sweep(const SweepOptions& opt) {
    refuse_overwrite(opt.out_path, opt.force);
    const std::string summary_path = [&] {
        fs::path p(opt.out_path);
        const std::string stem = p.stem().string();
        p.replace_filename(stem + "_summary" + p.extension().string());
        return p.string();
    }();
    refuse_overwrite(summary_path, opt.force);

    for (double rho : opt.rhos) {
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw CliError("rho values must lie in [0, 1], got " + format_double(rho));
        }
    }
    for (const auto& arm : opt.arms) arm_toggles(arm); // validate names up front

    const json base_config = load_normalized_config(opt.config_path);

    std::vector<SweepRow> rows;
    const std::size_t total_runs = opt.arms.size() * opt.rhos.size() * opt.seeds.size();
    std::size_t done = 0;

    for (std::uint64_t seed : opt.seeds) {
        // One dataset and split per seed, shared by every arm and rho.
        json config = base_config;
        config["train"]["seed"] = seed;
        if (!config["data"].contains("csv")) {
            const std::uint64_t base_seed = config["data"]["synth"]["seed"].get<std::uint64_t>();
            config["data"]["synth"]["seed"] = mix_seed(base_seed, seed);
        }
        if (!config["data"].contains("split_seed")) {
            config["data"]["split_seed"] = mix_seed(0x73706c6974ULL, seed);
        }
        DatasetHandle dataset = materialize_dataset(config["data"]);
        SplitHandles parts = split_dataset(dataset.get(), config);

        for (std::size_t r = 0; r < opt.rhos.size(); ++r) {
            const double rho = opt.rhos[r];
            casreg_dataset* censored = nullptr;
            check(casreg_dataset_simulate_censoring(parts.train.get(), rho,
                                                    mix_seed(mix_seed(0x63656e73ULL, seed), r), &censored),
                  "simulating censoring");
            DatasetHandle censored_train(censored);

            for (const auto& arm : opt.arms) {
                const ArmToggles toggles = arm_toggles(arm);
                json run_config = config;
                run_config["train"]["pseudo_labels"] = toggles.pseudo;
                run_config["train"]["rank_loss"] = toggles.rank;
                run_config["train"]["elr"] = toggles.elr;

                TrainRunOutput run = run_training(censored_train.get(), parts.val.get(), run_config, nullptr);
                const json metrics =
                    json::parse(evaluate_to_json(run.checkpoint.get(), parts.test.get(), "test split"));

                SweepRow row;
                row.arm = arm;
                row.rho = rho;
                row.seed = seed;
                row.censored_mae = metrics["patient"]["censored_mae"].get<double>();
                if (!metrics["patient"]["uncensored_mae"].is_null()) {
                    row.uncensored_mae = metrics["patient"]["uncensored_mae"].get<double>();
                }
                if (!metrics["patient"]["c_index"].is_null()) {
                    row.c_index = metrics["patient"]["c_index"].get<double>();
                }
                rows.push_back(std::move(row));

                ++done;
                std::cerr << "[" << done << "/" << total_runs << "] arm=" << arm << " rho=" << format_double(rho)
                          << " seed=" << seed << " censored_mae=" << format_double(rows.back().censored_mae) << "\n";
            }
        }
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.arm != b.arm) return a.arm < b.arm;
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.seed < b.seed;
    });

    std::ostringstream csv;
    csv << "arm,rho,seed,censored_mae,uncensored_mae,c_index\n";
    auto opt_cell = [](const std::optional<double>& v) { return v.has_value() ? format_double(*v) : std::string(); };
    for (const auto& row : rows) {
        csv << row.arm << ',' << format_double(row.rho) << ',' << row.seed << ',' << format_double(row.censored_mae)
            << ',' << opt_cell(row.uncensored_mae) << ',' << opt_cell(row.c_index) << "\n";
    }

    // Mean and sample standard deviation over seeds, per (arm, rho).
    std::ostringstream summary;
    summary << "arm,rho,n,mean_censored_mae,std_censored_mae,mean_uncensored_mae,std_uncensored_mae,"
               "mean_c_index,std_c_index\n";
    std::map<std::pair<std::string, double>, std::vector<const SweepRow*>> groups;
    for (const auto& row : rows) groups[{row.arm, row.rho}].push_back(&row);
    auto mean_std = [](const std::vector<double>& values) -> std::pair<double, double> {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
        return {mean, std::sqrt(var)};
    };
    for (const auto& [key, members] : groups) {
        std::vector<double> cmae, umae, ci;
        for (const auto* row : members) {
            cmae.push_back(row->censored_mae);
            if (row->uncensored_mae) umae.push_back(*row->uncensored_mae);
            if (row->c_index) ci.push_back(*row->c_index);
        }
        summary << key.first << ',' << format_double(key.second) << ',' << members.size();
        const auto [cm, cs] = mean_std(cmae);
        summary << ',' << format_double(cm) << ',' << format_double(cs);
        if (!umae.empty()) {
            const auto [um, us] = mean_std(umae);
            summary << ',' << format_double(um) << ',' << format_double(us);
        } else {
            summary << ",,";
        }
        if (!ci.empty()) {
            const auto [im, is] = mean_std(ci);
            summary << ',' << format_double(im) << ',' << format_double(is);
        } else {
            summary << ",,";
        }
        summary << "\n";
    }

    std::vector<std::string> written;
    try {
        write_file(opt.out_path, csv.str());
        written.push_back(opt.out_path);
        write_file(summary_path, summary.str());
        written.push_back(summary_path);
    } catch (...) {
        for (const auto& path : written) std::remove(path.c_str());
        throw;
    }
    std::cerr << "sweep done: " << rows.size() << " rows in " << opt.out_path << ", summary in " << summary_path
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"censor-aware survival time regression"};
    app.require_subcommand(1);

    GenDataOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic survival dataset as CSV");
    gen->add_option("--config", gen_opt.config_path, "experiment config (data.synth section is the base spec)");
    gen->add_option("--out", gen_opt.out_path, "output CSV path")->required();
    gen->add_flag("--force", gen_opt.force, "overwrite existing outputs");
    gen->add_option("--seed", gen_opt.seed, "generator seed");
    gen->add_option("--n-patients", gen_opt.n_patients, "number of patients");
    gen->add_option("--samples-per-patient", gen_opt.samples_per_patient, "samples per patient");
    gen->add_option("--dim", gen_opt.dim, "feature dimension");
    gen->add_option("--censor-prob", gen_opt.censor_prob, "per-patient censoring probability");
    gen->add_option("--noise", gen_opt.noise, "per-sample feature noise");
    gen->add_option("--t-max", gen_opt.t_max, "survival horizon in days");
    gen->add_option("--weibull-shape", gen_opt.weibull_shape, "time noise shape (<= 0 disables)");
    gen->add_option("--risk-scale", gen_opt.risk_scale, "risk scale");

    std::string plan_data;
    int plan_bins = 5;
    CLI::App* plan = app.add_subcommand("bin-plan", "print the balanced bin schedule of a dataset as JSON");
    plan->add_option("--data", plan_data, "dataset CSV")->required();
    plan->add_option("--bins", plan_bins, "number of bins")->required();

    TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model and write checkpoint, history and metrics");
    train_cmd->add_option("--config", train_opt.config_path, "experiment config JSON");
    train_cmd->add_option("--schedule", train_opt.schedule_path, "bin schedule JSON file (from bin-plan)");
    train_cmd->add_option("--seed", train_opt.overrides.seed, "override train.seed");
    train_cmd->add_option("--output-dir", train_opt.overrides.output_dir, "override output.dir");
    train_cmd->add_flag("--no-pseudo", train_opt.overrides.no_pseudo, "disable pseudo-labeling");
    train_cmd->add_flag("--no-rank", train_opt.overrides.no_rank, "disable the rank loss");
    train_cmd->add_flag("--no-elr", train_opt.overrides.no_elr, "disable the ensemble regularizer");
    train_cmd->add_flag("--force", train_opt.force, "overwrite existing outputs");

    std::string eval_checkpoint, eval_data, eval_out;
    bool eval_json = false, eval_force = false;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint JSON file")->required();
    eval_cmd->add_option("--data", eval_data, "dataset CSV")->required();
    eval_cmd->add_option("--out", eval_out, "also write the metrics JSON here");
    eval_cmd->add_flag("--json", eval_json, "print JSON instead of the table");
    eval_cmd->add_flag("--force", eval_force, "overwrite existing outputs");

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep-censoring",
                                         "train every arm across censoring ratios and seeds, emit long-format CSV");
    sweep->add_option("--config", sweep_opt.config_path, "experiment config JSON");
    sweep->add_option("--out", sweep_opt.out_path, "output CSV path")->required();
    sweep->add_option("--rhos", sweep_opt.rhos, "censoring ratios")->delimiter(',');
    sweep->add_option("--seeds", sweep_opt.seeds, "seeds")->delimiter(',');
    sweep->add_option("--arms", sweep_opt.arms, "arms to run")->delimiter(',');
    sweep->add_flag("--force", sweep_opt.force, "overwrite existing outputs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen_data(gen_opt);
        if (plan->parsed()) return run_bin_plan(plan_data, plan_bins);
        if (train_cmd->parsed()) return run_train(train_opt);
        if (eval_cmd->parsed()) return run_evaluate(eval_checkpoint, eval_data, eval_out, eval_json, eval_force);
        if (sweep->parsed()) return run_sweep(sweep_opt);
    } catch (const std::exception& e) {
        std::cerr << "casreg: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
