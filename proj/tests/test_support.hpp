#pragma once

// Shared helpers for the test suite. Everything here is deliberately
// independent of the library implementation: the oracles recompute expected
// values from first principles so they can catch bugs in the real code
// paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "casreg/metrics.hpp"

namespace testsupport {

// Central finite difference of a scalar function of one vector argument.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double step) {
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + step;
        const double hi = f(x);
        x[i] = orig - step;
        const double lo = f(x);
        x[i] = orig;
        grad[i] = (hi - lo) / (2.0 * step);
    }
    return grad;
}

// Relative error with an absolute floor so that near-zero pairs compare
// sanely.
inline double rel_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
    return std::abs(a - b) / scale;
}

// ------------------------------------------------------------------
// Brute-force metric oracles (Harrell pairs, Eq.-style MAE, grouping).

// Mirrors the censoring-aware MAE definition with indicator arithmetic.
inline double oracle_censored_mae(const std::vector<casreg::PredRecord>& preds) {
    double sum = 0.0;
    for (const auto& p : preds) {
        const double err = std::abs(p.t_hat - p.y);
        const double under = p.t_hat < p.y ? 1.0 : 0.0;
        const double over = p.t_hat < p.y ? 0.0 : 1.0;
        sum += err * under + (1.0 - static_cast<double>(p.e)) * err * over;
    }
    return sum / static_cast<double>(preds.size());
}

inline bool oracle_uncensored_mae(const std::vector<casreg::PredRecord>& preds, double* out) {
    std::vector<double> errors;
    for (const auto& p : preds) {
        if (p.e == 0) errors.push_back(std::abs(p.t_hat - p.y));
    }
    if (errors.empty()) return false;
    double sum = 0.0;
    for (double e : errors) sum += e;
    *out = sum / static_cast<double>(errors.size());
    return true;
}

// Exhaustive ordered-pair enumeration, accumulating the 1 / 0.5 / 0 scores
// as doubles in pair order.
inline bool oracle_c_index(const std::vector<casreg::PredRecord>& preds, double* out) {
    double score = 0.0;
    long long pairs = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        for (std::size_t j = 0; j < preds.size(); ++j) {
            if (i == j) continue;
            if (preds[i].e != 0) continue;
            if (!(preds[i].y < preds[j].y)) continue;
            ++pairs;
            if (preds[i].t_hat < preds[j].t_hat) score += 1.0;
            else if (preds[i].t_hat == preds[j].t_hat) score += 0.5;
        }
    }
    if (pairs == 0) return false;
    *out = score / static_cast<double>(pairs);
    return true;
}

// Number of comparable ordered pairs under the Harrell convention.
inline long long oracle_comparable_pairs(const std::vector<casreg::PredRecord>& preds) {
    long long pairs = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        for (std::size_t j = 0; j < preds.size(); ++j) {
            if (i == j) continue;
            if (preds[i].e == 0 && preds[i].y < preds[j].y) ++pairs;
        }
    }
    return pairs;
}

// Group-then-average oracle keyed and sorted by patient id.
inline std::map<std::string, casreg::PredRecord> oracle_patient_means(const std::vector<casreg::PredRecord>& preds) {
    std::map<std::string, std::vector<const casreg::PredRecord*>> groups;
    for (const auto& p : preds) groups[p.patient_id].push_back(&p);
    std::map<std::string, casreg::PredRecord> out;
    for (const auto& [pid, members] : groups) {
        casreg::PredRecord agg = *members.front();
        double sum = 0.0;
        for (const auto* m : members) sum += m->t_hat;
        agg.t_hat = sum / static_cast<double>(members.size());
        out[pid] = agg;
    }
    return out;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (double v : ra) mean_a += v;
    for (double v : rb) mean_b += v;
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    return cov / std::sqrt(var_a * var_b);
}

// Random evaluation instances for the metric oracle sweeps. Times are
// drawn with a deliberate chance of exact ties. Each record gets its own
// patient so the instances are valid for every metric.
inline std::vector<casreg::PredRecord> random_preds(std::mt19937& gen, std::size_t max_size) {
    std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
    std::uniform_real_distribution<double> time_dist(1.0, 200.0);
    std::uniform_int_distribution<int> flag_dist(0, 1);
    std::uniform_int_distribution<int> tie_dist(0, 4);
    const std::size_t n = size_dist(gen);
    std::vector<casreg::PredRecord> preds;
    preds.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        casreg::PredRecord p;
        p.t_hat = tie_dist(gen) == 0 ? std::floor(time_dist(gen)) : time_dist(gen);
        p.y = tie_dist(gen) == 0 ? std::floor(time_dist(gen)) : time_dist(gen);
        p.e = flag_dist(gen);
        p.patient_id = "pt" + std::to_string(i);
        preds.push_back(std::move(p));
    }
    return preds;
}

// Random instances where several samples share a patient and patients share
// (y, e), as the aggregation contract requires.
inline std::vector<casreg::PredRecord> random_grouped_preds(std::mt19937& gen, std::size_t max_patients) {
    std::uniform_int_distribution<std::size_t> patients_dist(1, max_patients);
    std::uniform_int_distribution<std::size_t> member_dist(1, 4);
    std::uniform_real_distribution<double> time_dist(1.0, 200.0);
    std::uniform_int_distribution<int> flag_dist(0, 1);
    const std::size_t n_patients = patients_dist(gen);
    std::vector<casreg::PredRecord> preds;
    for (std::size_t p = 0; p < n_patients; ++p) {
        const double y = time_dist(gen);
        const int e = flag_dist(gen);
        const std::size_t members = member_dist(gen);
        for (std::size_t m = 0; m < members; ++m) {
            preds.push_back(casreg::PredRecord{time_dist(gen), y, e, "pt" + std::to_string(p)});
        }
    }
    return preds;
}

} // namespace testsupport
