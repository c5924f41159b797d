#include "casreg/pseudo.hpp"

#include <algorithm>
#include <cmath>

#include "casreg/errors.hpp"

namespace casreg {

double schedule_ratio(int k, int k_total) {
    if (k_total < 1) {
        throw InvalidArgument("schedule_ratio: k_total must be >= 1, got " + std::to_string(k_total));
    }
    if (k < 0 || k > k_total) {
        throw InvalidArgument("schedule_ratio: epoch index " + std::to_string(k) + " outside [0, " +
                              std::to_string(k_total) + "]");
    }
    const double pi = 3.14159265358979323846;
    return (1.0 + std::cos(pi * (1.0 - static_cast<double>(k) / static_cast<double>(k_total)))) / 2.0;
}

std::vector<std::string> select_pseudo_set(const std::vector<std::string>& censored_ids, double m, Rng& rng) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw InvalidArgument("select_pseudo_set: ratio must lie in [0, 1], got " + std::to_string(m));
    }
    const std::size_t n = censored_ids.size();
    const std::size_t take = static_cast<std::size_t>(
        std::llround(m * static_cast<double>(n)));

    // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<std::string> selected;
    selected.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
        selected.push_back(censored_ids[order[i]]);
    }
    return selected;
}

Sample relabel(const Sample& sample, double t_hat) {
    if (sample.e != 1) {
        throw InvalidArgument("relabel: sample '" + sample.id + "' is not censored");
    }
    Sample out = sample;
    out.y = std::max(sample.y, t_hat);
    out.e = 0;
    out.s = 1;
    return out;
}

} // namespace casreg
