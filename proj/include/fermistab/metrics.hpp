#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fermistab/frame.hpp"

namespace fermistab {

// Postselected observable-error metrics for one sampled batch. `r_obs` holds
// the per-column flip rates of the regular observables (VQED verification
// columns are excluded from all r_obs statistics).
struct MetricsReport {
    std::size_t n_samp = 0;
    std::size_t n_discard = 0;
    double r_det = 0.0;
    std::size_t n_post = 0;
    double r_obs_any = 0.0;
    double r_obs_worst = 0.0;
    std::vector<double> r_obs;
    double ci_low = 0.0;   // bootstrap percentile CI for r_obs_worst
    double ci_high = 0.0;
    bool excluded = false;
    std::optional<double> vqed_est;    // verified estimator for observable 0
    std::optional<double> vqed_var;    // its delta-method variance
    std::optional<double> vqed_sum_o;  // raw numerator sum (outcome x check product)
    std::optional<double> vqed_sum_b;  // raw denominator sum (check products)
};

struct MetricsOptions {
    std::size_t bootstrap_resamples = 1000;
    double exclude_r_det = 0.995;
    std::size_t exclude_min_post = 500;
    uint64_t bootstrap_seed = 0;
};

// Shots whose detector row is entirely zero, in increasing order.
std::vector<std::size_t> postselect_shots(const SampleResult& samples);

// Computes discard/flip rates over the postselected shots, a seeded bootstrap
// CI for the worst observable rate (resampling full shots and
// re-postselecting), the exclusion flag, and - when vqed_b_start marks
// verification columns - the verified ratio estimator for observable 0 with
// its delta-method variance (throws std::runtime_error if the verification
// denominator is zero).
MetricsReport compute_metrics(const SampleResult& samples,
                              uint32_t vqed_b_start = UINT32_MAX,
                              const MetricsOptions& opts = {});

}  // namespace fermistab
