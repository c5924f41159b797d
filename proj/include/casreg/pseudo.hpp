#pragma once

#include <string>
#include <vector>

#include "casreg/core.hpp"
#include "casreg/rng.hpp"

namespace casreg {

// Cosine-annealed fraction of censored samples to pseudo-label at epoch k:
// (1 + cos(pi * (1 - k / k_total))) / 2. Exactly 0 at k = 0 and exactly 1 at
// k = k_total, monotone non-decreasing in between.
double schedule_ratio(int k, int k_total);

// Uniform subset of round(m * |censored_ids|) ids, without replacement,
// reproducible from the generator state.
std::vector<std::string> select_pseudo_set(const std::vector<std::string>& censored_ids, double m, Rng& rng);

// Replaces a censored sample's label with the pseudo label max(y, t_hat) and
// marks it as pseudo-labeled uncensored. The input is copied, never mutated.
// Calling this on an uncensored sample is a contract violation.
Sample relabel(const Sample& sample, double t_hat);

// Audit record of one epoch's pseudo-labeling decision.
struct PseudoPlan {
    int epoch = 0;
    int k_total = 0;
    double ratio = 0.0;
    std::vector<std::string> selected;
};

} // namespace casreg
