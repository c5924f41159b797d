#include "casreg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "casreg/errors.hpp"
#include "casreg/rng.hpp"
#include "casreg/text.hpp"

namespace casreg {

namespace {

double parse_double(const std::string& field, const std::string& what, std::size_t row) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParseError("row " + std::to_string(row) + ": " + what + " is not a number: '" + field + "'");
    }
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

} // namespace

void Dataset::validate() const {
    if (samples.empty()) {
        throw DataError("dataset has no samples");
    }
    std::unordered_set<std::string> ids;
    std::unordered_map<std::string, std::pair<double, int>> patient_label;
    for (const auto& s : samples) {
        validate_sample(s);
        if (static_cast<int>(s.features.size()) != feature_dim) {
            throw DataError("sample '" + s.id + "' has " + std::to_string(s.features.size()) +
                            " features, expected " + std::to_string(feature_dim));
        }
        if (!ids.insert(s.id).second) {
            throw DataError("duplicate sample id '" + s.id + "'");
        }
        auto [it, inserted] = patient_label.emplace(s.patient_id, std::make_pair(s.y, s.e));
        if (!inserted && (it->second.first != s.y || it->second.second != s.e)) {
            throw DataError("patient '" + s.patient_id + "' carries inconsistent (y, e) across samples");
        }
    }
}

std::vector<std::string> Dataset::patient_ids() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& s : samples) {
        if (seen.insert(s.patient_id).second) {
            out.push_back(s.patient_id);
        }
    }
    return out;
}

long long Dataset::n_censored() const {
    long long count = 0;
    for (const auto& s : samples)
        if (s.e == 1) ++count;
    return count;
}

long long Dataset::n_uncensored() const {
    return static_cast<long long>(samples.size()) - n_censored();
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("'" + path + "': missing header row");
    }
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 5 || header[0] != "id" || header[1] != "patient_id" || header[2] != "y" || header[3] != "e") {
        throw ParseError("'" + path + "': header must start with id,patient_id,y,e,f0,...");
    }
    const int dim = static_cast<int>(header.size()) - 4;
    for (int i = 0; i < dim; ++i) {
        if (header[static_cast<std::size_t>(i) + 4] != "f" + std::to_string(i)) {
            throw ParseError("'" + path + "': feature column " + std::to_string(i) + " must be named f" +
                             std::to_string(i));
        }
    }

    Dataset dataset;
    dataset.feature_dim = dim;
    dataset.provenance = "csv:" + path;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size()) {
            throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(fields.size()));
        }
        Sample s;
        s.id = fields[0];
        s.patient_id = fields[1];
        s.y = parse_double(fields[2], "observed time y", row);
        const double e = parse_double(fields[3], "censor flag e", row);
        if (e != 0.0 && e != 1.0) {
            throw ParseError("row " + std::to_string(row) + ": censor flag e must be 0 or 1, got '" + fields[3] + "'");
        }
        s.e = static_cast<int>(e);
        if (!(s.y > 0.0) || !std::isfinite(s.y)) {
            throw ParseError("row " + std::to_string(row) + ": observed time y must be positive, got '" + fields[2] +
                             "'");
        }
        s.features.reserve(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            s.features.push_back(parse_double(fields[static_cast<std::size_t>(i) + 4], "feature f" + std::to_string(i), row));
        }
        dataset.samples.push_back(std::move(s));
    }
    dataset.validate();
    return dataset;
}

void save_csv(const Dataset& dataset, const std::string& path) {
    dataset.validate();
    std::ostringstream out;
    out << "id,patient_id,y,e";
    for (int i = 0; i < dataset.feature_dim; ++i) {
        out << ",f" << i;
    }
    out << "\n";
    for (const auto& s : dataset.samples) {
        if (s.id.find(',') != std::string::npos || s.patient_id.find(',') != std::string::npos) {
            throw DataError("sample id '" + s.id + "' contains a comma and cannot be written as CSV");
        }
        out << s.id << ',' << s.patient_id << ',' << format_double(s.y) << ',' << s.e;
        for (double f : s.features) {
            out << ',' << format_double(f);
        }
        out << "\n";
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    file << out.str();
    if (!file) {
        throw IoError("failed while writing '" + path + "'");
    }
}

void SynthSpec::validate() const {
    if (n_patients < 1) throw InvalidArgument("synth.n_patients must be >= 1");
    if (samples_per_patient < 1) throw InvalidArgument("synth.samples_per_patient must be >= 1");
    if (dim < 1) throw InvalidArgument("synth.dim must be >= 1");
    if (!(censor_prob >= 0.0 && censor_prob < 1.0)) throw InvalidArgument("synth.censor_prob must lie in [0, 1)");
    if (!(noise >= 0.0)) throw InvalidArgument("synth.noise must be >= 0");
    if (!(t_max > 0.0)) throw InvalidArgument("synth.t_max must be > 0");
    if (!(risk_scale > 0.0)) throw InvalidArgument("synth.risk_scale must be > 0");
}

nlohmann::json SynthSpec::to_json() const {
    return nlohmann::json{{"n_patients", n_patients},
                          {"samples_per_patient", samples_per_patient},
                          {"dim", dim},
                          {"censor_prob", censor_prob},
                          {"noise", noise},
                          {"t_max", t_max},
                          {"weibull_shape", weibull_shape},
                          {"risk_scale", risk_scale},
                          {"seed", seed}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
    SynthSpec spec;
    if (!j.is_object()) {
        throw ParseError("synth spec must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "n_patients") spec.n_patients = value.get<long long>();
        else if (key == "samples_per_patient") spec.samples_per_patient = value.get<int>();
        else if (key == "dim") spec.dim = value.get<int>();
        else if (key == "censor_prob") spec.censor_prob = value.get<double>();
        else if (key == "noise") spec.noise = value.get<double>();
        else if (key == "t_max") spec.t_max = value.get<double>();
        else if (key == "weibull_shape") spec.weibull_shape = value.get<double>();
        else if (key == "risk_scale") spec.risk_scale = value.get<double>();
        else if (key == "seed") spec.seed = value.get<std::uint64_t>();
        else throw ParseError("synth spec has unknown key '" + key + "'");
    }
    spec.validate();
    return spec;
}

namespace {

double softplus(double x) {
    if (x > 30.0) return x;
    return std::log1p(std::exp(x));
}

// Unit-median Weibull draw via the inverse CDF.
double weibull_unit_median(double shape, Rng& rng) {
    double u = 0.0;
    do {
        u = rng.uniform();
    } while (u <= 0.0);
    const double ln2 = 0.6931471805599453;
    return std::pow(-std::log1p(-u) / ln2, 1.0 / shape);
}

// Uniform draw from [lo, hi) that is guaranteed strictly below hi.
double uniform_below(double lo, double hi, Rng& rng) {
    double u = lo + rng.uniform() * (hi - lo);
    if (u >= hi) {
        u = std::nextafter(hi, lo);
    }
    return u;
}

} // namespace

Dataset generate_synthetic(const SynthSpec& spec, SynthDebug* debug) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, 0x67656e)); // generation stream

    // Fixed unit risk direction shared by the whole cohort.
    std::vector<double> w(static_cast<std::size_t>(spec.dim));
    double norm = 0.0;
    for (double& v : w) {
        v = rng.normal();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) norm = 1.0;
    for (double& v : w) v /= norm;

    if (debug != nullptr) {
        debug->risk_direction = w;
        debug->patient_risk.clear();
        debug->patient_time.clear();
    }

    Dataset dataset;
    dataset.feature_dim = spec.dim;
    dataset.provenance = "synthetic:" + spec.to_json().dump();

    for (long long p = 0; p < spec.n_patients; ++p) {
        std::vector<double> base(static_cast<std::size_t>(spec.dim));
        double risk = 0.0;
        for (std::size_t i = 0; i < base.size(); ++i) {
            base[i] = rng.normal();
            risk += w[i] * base[i];
        }
        risk *= spec.risk_scale;

        const double noise_draw = spec.weibull_shape > 0.0 ? weibull_unit_median(spec.weibull_shape, rng) : 1.0;
        const double t = std::clamp(spec.t_max * std::exp(-softplus(risk)) * noise_draw, 1.0, spec.t_max);

        double y = t;
        int e = 0;
        if (rng.uniform() < spec.censor_prob && t > 1.0) {
            y = uniform_below(1.0, t, rng);
            e = 1;
        }

        if (debug != nullptr) {
            debug->patient_risk.push_back(risk);
            debug->patient_time.push_back(t);
        }

        const std::string patient_id = "p" + std::to_string(p);
        for (int sidx = 0; sidx < spec.samples_per_patient; ++sidx) {
            Sample s;
            s.id = patient_id + "_" + std::to_string(sidx);
            s.patient_id = patient_id;
            s.y = y;
            s.e = e;
            s.features = base;
            if (spec.noise > 0.0) {
                for (double& f : s.features) {
                    f += spec.noise * rng.normal();
                }
            }
            dataset.samples.push_back(std::move(s));
        }
    }

    dataset.validate();
    return dataset;
}

Dataset simulate_censoring(const Dataset& dataset, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw InvalidArgument("simulate_censoring: rho must lie in [0, 1], got " + std::to_string(rho));
    }
    dataset.validate();

    // Uncensored patients in order of first appearance.
    std::vector<std::string> uncensored;
    std::unordered_map<std::string, double> patient_y;
    {
        std::unordered_set<std::string> seen;
        for (const auto& s : dataset.samples) {
            if (seen.insert(s.patient_id).second && s.e == 0) {
                uncensored.push_back(s.patient_id);
                patient_y.emplace(s.patient_id, s.y);
            }
        }
    }

    const std::size_t take = static_cast<std::size_t>(
        std::llround(rho * static_cast<double>(uncensored.size())));

    Rng rng(derive_seed(seed, 0x63656e73)); // censoring stream
    std::vector<std::string> order = uncensored;
    rng.shuffle(order);
    std::unordered_set<std::string> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));

    // Draw one censor time per chosen patient, in first-appearance order so
    // the result does not depend on the shuffle layout.
    std::unordered_map<std::string, double> new_y;
    for (const auto& pid : uncensored) {
        if (chosen.count(pid) == 0) continue;
        const double y = patient_y.at(pid);
        const double lo = std::min(1.0, y / 2.0);
        new_y.emplace(pid, uniform_below(lo, y, rng));
    }

    Dataset out = dataset;
    out.provenance = dataset.provenance + "|simulate_censoring(rho=" + std::to_string(rho) + ")";
    for (auto& s : out.samples) {
        auto it = new_y.find(s.patient_id);
        if (it != new_y.end()) {
            s.y = it->second;
            s.e = 1;
        }
    }
    out.validate();
    return out;
}

void SplitFractions::validate() const {
    if (!(train > 0.0 && val > 0.0 && test > 0.0)) {
        throw InvalidArgument("split fractions must all be positive");
    }
    const double sum = train + val + test;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw InvalidArgument("split fractions must sum to 1, got " + std::to_string(sum));
    }
}

std::array<Dataset, 3> split_patient_wise(const Dataset& dataset, const SplitFractions& fractions,
                                          std::uint64_t seed) {
    fractions.validate();
    dataset.validate();

    std::vector<std::string> patients = dataset.patient_ids();
    const std::size_t n = patients.size();
    if (n < 3) {
        throw InvalidArgument("split_patient_wise: need at least 3 patients, got " + std::to_string(n));
    }

    Rng rng(derive_seed(seed, 0x73706c69)); // split stream
    rng.shuffle(patients);

    // Largest-remainder apportionment keeps every part within one patient
    // of its target.
    const std::array<double, 3> fracs = {fractions.train, fractions.val, fractions.test};
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainders{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double target = fracs[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(target));
        remainders[i] = target - std::floor(target);
        assigned += counts[i];
    }
    while (assigned < n) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < 3; ++i) {
            if (remainders[i] > remainders[best]) best = i;
        }
        counts[best] += 1;
        remainders[best] = -1.0;
        ++assigned;
    }

    std::unordered_map<std::string, int> part_of;
    std::size_t cursor = 0;
    for (int part = 0; part < 3; ++part) {
        for (std::size_t i = 0; i < counts[static_cast<std::size_t>(part)]; ++i) {
            part_of.emplace(patients[cursor++], part);
        }
    }

    std::array<Dataset, 3> out;
    const std::array<std::string, 3> names = {"train", "val", "test"};
    for (int part = 0; part < 3; ++part) {
        out[static_cast<std::size_t>(part)].feature_dim = dataset.feature_dim;
        out[static_cast<std::size_t>(part)].provenance =
            dataset.provenance + "|split:" + names[static_cast<std::size_t>(part)];
    }
    for (const auto& s : dataset.samples) {
        out[static_cast<std::size_t>(part_of.at(s.patient_id))].samples.push_back(s);
    }
    return out;
}

} // namespace casreg
