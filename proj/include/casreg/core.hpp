#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace casreg {

// One observation: a feature vector with its observed time in days, the
// censor flag and the pseudo-label flag. `e == 1` means the event was not
// observed and `y` is only a lower bound on the true survival time.
// `s == 1` marks samples whose label was replaced by a pseudo label; it is
// only ever set by the pseudo-labeler, never by data ingestion.
struct Sample {
    std::string id;
    std::string patient_id;
    std::vector<double> features;
    double y = 0.0;
    int e = 0;
    int s = 0;
};

// Throws InvalidArgument if the sample violates y > 0, e in {0,1}, s in {0,1}.
void validate_sample(const Sample& sample);

// Discretization of the survival horizon: `bins()[n]` is the day span of bin
// n and `total()` is the exact running sum of all spans (the upper limit for
// any prediction made against this schedule).
class BinSchedule {
public:
    explicit BinSchedule(std::vector<double> bins);

    int n_bins() const { return static_cast<int>(bins_.size()); }
    double total() const { return total_; }
    const std::vector<double>& bins() const { return bins_; }

    // {"bins": [days...], "total": days}
    nlohmann::json to_json() const;
    static BinSchedule from_json(const nlohmann::json& j);

private:
    std::vector<double> bins_;
    double total_ = 0.0;
};

// Numerically stable logistic function. Reaches 0.0 and 1.0 exactly for
// strongly saturated inputs.
double sigmoid(double x);

// Builds a balanced bin schedule from observed times: cumulative bin edges
// are the k/n_bins nearest-rank quantiles of `times` for k = 1..n_bins-1 and
// the last edge is max(times). Throws InvalidArgument on empty input or bad
// n_bins, DataError when duplicated times collapse the edges.
BinSchedule bin_plan(std::vector<double> times, int n_bins);

// Survival-time head: t = total - sum_n bins[n] * sigmoid(logits[n]).
// Larger activations mean higher risk and a shorter predicted time.
double logits_to_time(std::span<const double> logits, const BinSchedule& schedule);

// d t / d logits[n] = -bins[n] * sigmoid(logits[n]) * (1 - sigmoid(logits[n])).
std::vector<double> time_gradient(std::span<const double> logits, const BinSchedule& schedule);

} // namespace casreg
