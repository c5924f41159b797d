#include "casreg/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "casreg/errors.hpp"

namespace casreg {

void validate_sample(const Sample& sample) {
    if (!(sample.y > 0.0) || !std::isfinite(sample.y)) {
        throw InvalidArgument("sample '" + sample.id + "': observed time must be a finite positive number, got " +
                              std::to_string(sample.y));
    }
    if (sample.e != 0 && sample.e != 1) {
        throw InvalidArgument("sample '" + sample.id + "': censor flag must be 0 or 1, got " +
                              std::to_string(sample.e));
    }
    if (sample.s != 0 && sample.s != 1) {
        throw InvalidArgument("sample '" + sample.id + "': pseudo flag must be 0 or 1, got " +
                              std::to_string(sample.s));
    }
}

BinSchedule::BinSchedule(std::vector<double> bins) : bins_(std::move(bins)) {
    if (bins_.empty()) {
        throw InvalidArgument("bin schedule needs at least one bin");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        if (!(bins_[i] > 0.0) || !std::isfinite(bins_[i])) {
            throw InvalidArgument("bin " + std::to_string(i) + " must be a finite positive day count, got " +
                                  std::to_string(bins_[i]));
        }
    }
    total_ = 0.0;
    for (double b : bins_) total_ += b;
}

nlohmann::json BinSchedule::to_json() const {
    return nlohmann::json{{"bins", bins_}, {"total", total_}};
}

BinSchedule BinSchedule::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("bins") || !j.contains("total")) {
        throw ParseError("bin schedule JSON must be an object with 'bins' and 'total'");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "bins" && key != "total") {
            throw ParseError("bin schedule JSON has unknown key '" + key + "'");
        }
    }
    if (!j["bins"].is_array()) {
        throw ParseError("bin schedule 'bins' must be an array of day counts");
    }
    BinSchedule schedule(j["bins"].get<std::vector<double>>());
    const double total = j["total"].get<double>();
    if (total != schedule.total()) {
        std::ostringstream oss;
        oss << "bin schedule 'total' (" << total << ") does not equal the sum of 'bins' (" << schedule.total() << ")";
        throw ParseError(oss.str());
    }
    return schedule;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double z = std::exp(x);
    return z / (1.0 + z);
}

BinSchedule bin_plan(std::vector<double> times, int n_bins) {
    if (times.empty()) {
        throw InvalidArgument("bin_plan: empty list of observed times");
    }
    for (double t : times) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw InvalidArgument("bin_plan: all observed times must be finite and positive, got " +
                                  std::to_string(t));
        }
    }
    if (n_bins < 1) {
        throw InvalidArgument("bin_plan: n_bins must be >= 1, got " + std::to_string(n_bins));
    }
    std::sort(times.begin(), times.end());
    const std::size_t distinct = std::set<double>(times.begin(), times.end()).size();
    if (static_cast<std::size_t>(n_bins) > distinct) {
        throw InvalidArgument("bin_plan: n_bins (" + std::to_string(n_bins) + ") exceeds the number of distinct times (" +
                              std::to_string(distinct) + ")");
    }

    // Nearest-rank quantiles, no interpolation: rank = ceil(k*n / n_bins).
    const std::size_t n = times.size();
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(n_bins));
    for (int k = 1; k < n_bins; ++k) {
        const std::size_t rank = (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(n_bins) - 1) /
                                 static_cast<std::size_t>(n_bins);
        edges.push_back(times[rank - 1]);
    }
    edges.push_back(times.back());

    double prev = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!(edges[i] > prev)) {
            throw DataError("bin_plan: degenerate bins, edge " + std::to_string(i + 1) + " (" +
                            std::to_string(edges[i]) + ") does not exceed the previous edge (" + std::to_string(prev) +
                            "); too few distinct time values for " + std::to_string(n_bins) + " bins");
        }
        prev = edges[i];
    }

    std::vector<double> bins(edges.size());
    bins[0] = edges[0];
    for (std::size_t i = 1; i < edges.size(); ++i) {
        bins[i] = edges[i] - edges[i - 1];
    }

    // The telescoped float sum of the differences can drift from max(times)
    // by a few ulps; nudge the last bin until the running sum lands exactly.
    const double max_time = times.back();
    for (int iter = 0; iter < 16; ++iter) {
        double sum = 0.0;
        for (double b : bins) sum += b;
        if (sum == max_time) break;
        bins.back() += max_time - sum;
        if (!(bins.back() > 0.0)) {
            throw DataError("bin_plan: degenerate final bin after edge rounding");
        }
    }

    return BinSchedule(std::move(bins));
}

double logits_to_time(std::span<const double> logits, const BinSchedule& schedule) {
    if (static_cast<int>(logits.size()) != schedule.n_bins()) {
        throw DimensionError("logits_to_time: got " + std::to_string(logits.size()) + " logits for a schedule with " +
                             std::to_string(schedule.n_bins()) + " bins");
    }
    const auto& bins = schedule.bins();
    double activated = 0.0;
    for (std::size_t n = 0; n < bins.size(); ++n) {
        activated += bins[n] * sigmoid(logits[n]);
    }
    return schedule.total() - activated;
}

std::vector<double> time_gradient(std::span<const double> logits, const BinSchedule& schedule) {
    if (static_cast<int>(logits.size()) != schedule.n_bins()) {
        throw DimensionError("time_gradient: got " + std::to_string(logits.size()) + " logits for a schedule with " +
                             std::to_string(schedule.n_bins()) + " bins");
    }
    const auto& bins = schedule.bins();
    std::vector<double> grad(bins.size());
    for (std::size_t n = 0; n < bins.size(); ++n) {
        const double sig = sigmoid(logits[n]);
        grad[n] = -bins[n] * sig * (1.0 - sig);
    }
    return grad;
}

} // namespace casreg
