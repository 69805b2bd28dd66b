#include "fermistab/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "fermistab/rng.hpp"

namespace fermistab {

namespace {

// Word-wise OR of all detector columns: bit s is set iff shot s fired any
// detector.
std::vector<uint64_t> detector_mask(const SampleResult& samples) {
    const BitTable& det = samples.detectors;
    std::size_t wpc = det.words_per_column();
    if (wpc == 0) {
        wpc = (det.num_shots() + 63) / 64;
    }
    std::vector<uint64_t> mask(wpc, 0);
    for (std::size_t j = 0; j < det.num_columns(); ++j) {
        const uint64_t* col = det.column(j);
        for (std::size_t w = 0; w < det.words_per_column(); ++w) mask[w] |= col[w];
    }
    // Clear padding bits above num_shots.
    std::size_t tail = det.num_shots() % 64;
    if (tail != 0 && !mask.empty()) {
        mask.back() &= (uint64_t{1} << tail) - 1;
    }
    return mask;
}

std::size_t count_bits(const std::vector<uint64_t>& words) {
    std::size_t n = 0;
    for (uint64_t w : words) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

}  // namespace

std::vector<std::size_t> postselect_shots(const SampleResult& samples) {
    std::vector<uint64_t> mask = detector_mask(samples);
    std::vector<std::size_t> keep;
    std::size_t shots =
        std::max(samples.detectors.num_shots(), samples.observables.num_shots());
    for (std::size_t s = 0; s < shots; ++s) {
        if (mask.empty() || !((mask[s / 64] >> (s % 64)) & 1)) keep.push_back(s);
    }
    return keep;
}

MetricsReport compute_metrics(const SampleResult& samples, uint32_t vqed_b_start,
                              const MetricsOptions& opts) {
    MetricsReport rep;
    const BitTable& obs = samples.observables;
    const std::size_t shots =
        std::max(samples.detectors.num_shots(), obs.num_shots());
    rep.n_samp = shots;
    if (shots == 0) {
        rep.excluded = true;
        return rep;
    }

    std::vector<uint64_t> mask = detector_mask(samples);
    mask.resize((shots + 63) / 64, 0);
    rep.n_discard = count_bits(mask);
    rep.r_det = static_cast<double>(rep.n_discard) / static_cast<double>(shots);
    rep.n_post = shots - rep.n_discard;

    // Padding lanes of the last word carry real sampled bits for shots beyond
    // num_shots; treat them as discarded so the word-wise counts skip them.
    std::vector<uint64_t> dead = mask;
    std::size_t tail_bits = shots % 64;
    if (tail_bits != 0 && !dead.empty()) {
        dead.back() |= ~((uint64_t{1} << tail_bits) - 1);
    }

    const std::size_t n_obs_total = obs.num_columns();
    const std::size_t n_regular =
        vqed_b_start == UINT32_MAX ? n_obs_total
                                   : std::min<std::size_t>(vqed_b_start, n_obs_total);

    // Per-column rates and the any-flip rate over the surviving shots.
    rep.r_obs.assign(n_regular, 0.0);
    std::vector<uint64_t> any(dead.size(), 0);
    for (std::size_t j = 0; j < n_regular; ++j) {
        const uint64_t* col = obs.column(j);
        std::size_t hits = 0;
        for (std::size_t w = 0; w < obs.words_per_column() && w < dead.size(); ++w) {
            uint64_t kept = col[w] & ~dead[w];
            hits += static_cast<std::size_t>(std::popcount(kept));
            any[w] |= kept;
        }
        if (rep.n_post > 0) {
            rep.r_obs[j] = static_cast<double>(hits) / static_cast<double>(rep.n_post);
        }
    }
    if (rep.n_post > 0) {
        rep.r_obs_any =
            static_cast<double>(count_bits(any)) / static_cast<double>(rep.n_post);
    }
    rep.r_obs_worst = rep.r_obs.empty()
                          ? 0.0
                          : *std::max_element(rep.r_obs.begin(), rep.r_obs.end());

    rep.excluded = rep.r_det >= opts.exclude_r_det || rep.n_post < opts.exclude_min_post;

    // ------------------------------------------------------------------
    // Bootstrap CI for the worst rate: resample whole shots, re-postselect.
    if (rep.n_post > 0 && n_regular > 0 && opts.bootstrap_resamples > 0) {
        // Compact per-shot records: survival bit + regular-observable pattern.
        if (n_regular > 64) throw std::logic_error("too many observables to bootstrap");
        std::vector<uint64_t> pattern(shots, 0);
        std::vector<uint8_t> alive(shots, 0);
        for (std::size_t s = 0; s < shots; ++s) {
            alive[s] = !((mask[s / 64] >> (s % 64)) & 1);
            if (!alive[s]) continue;
            uint64_t p = 0;
            for (std::size_t j = 0; j < n_regular; ++j) {
                if (obs.get(s, j)) p |= uint64_t{1} << j;
            }
            pattern[s] = p;
        }
        std::mt19937_64 rng = make_stream(opts.bootstrap_seed, 0x626f6f74);
        std::vector<double> worsts;
        worsts.reserve(opts.bootstrap_resamples);
        std::vector<std::size_t> counts(n_regular);
        for (std::size_t r = 0; r < opts.bootstrap_resamples; ++r) {
            std::fill(counts.begin(), counts.end(), 0);
            std::size_t kept = 0;
            for (std::size_t s = 0; s < shots; ++s) {
                std::size_t pick = static_cast<std::size_t>(rng() % shots);
                if (!alive[pick]) continue;
                ++kept;
                uint64_t p = pattern[pick];
                while (p) {
                    counts[static_cast<std::size_t>(std::countr_zero(p))] += 1;
                    p &= p - 1;
                }
            }
            if (kept == 0) continue;
            std::size_t worst = *std::max_element(counts.begin(), counts.end());
            worsts.push_back(static_cast<double>(worst) / static_cast<double>(kept));
        }
        if (!worsts.empty()) {
            std::sort(worsts.begin(), worsts.end());
            auto pick = [&](double q) {
                std::size_t idx = static_cast<std::size_t>(
                    q * static_cast<double>(worsts.size()));
                if (idx >= worsts.size()) idx = worsts.size() - 1;
                return worsts[idx];
            };
            // Widen to the point estimate so the interval always brackets it.
            rep.ci_low = std::min(pick(0.025), rep.r_obs_worst);
            rep.ci_high = std::max(pick(0.975), rep.r_obs_worst);
        }
    }

    // ------------------------------------------------------------------
    // VQED ratio estimator for observable 0 over the surviving shots.
    if (vqed_b_start != UINT32_MAX && n_obs_total > vqed_b_start) {
        double sum_b = 0.0, sum_ob = 0.0, sum_bb = 0.0, sum_oo = 0.0, sum_obb = 0.0;
        std::size_t n = 0;
        for (std::size_t s = 0; s < shots; ++s) {
            if ((mask[s / 64] >> (s % 64)) & 1) continue;
            double b_val = 1.0;
            for (std::size_t j = vqed_b_start; j < n_obs_total; ++j) {
                if (obs.get(s, j)) b_val = -b_val;
            }
            double o_val = obs.get(s, 0) ? -1.0 : 1.0;
            double ob = o_val * b_val;
            sum_b += b_val;
            sum_ob += ob;
            sum_bb += b_val * b_val;
            sum_oo += ob * ob;
            sum_obb += ob * b_val;
            ++n;
        }
        if (n == 0 || sum_b == 0.0) {
            throw std::runtime_error("VQED verification denominator is zero");
        }
        double nn = static_cast<double>(n);
        double mean_b = sum_b / nn;
        double mean_ob = sum_ob / nn;
        double est = mean_ob / mean_b;
        double var_ob = sum_oo / nn - mean_ob * mean_ob;
        double var_b = sum_bb / nn - mean_b * mean_b;
        double cov = sum_obb / nn - mean_ob * mean_b;
        double var_est = (var_ob - 2.0 * est * cov + est * est * var_b) /
                         (nn * mean_b * mean_b);
        rep.vqed_est = est;
        rep.vqed_var = var_est;
        rep.vqed_sum_o = sum_ob;
        rep.vqed_sum_b = sum_b;
    }

    return rep;
}

}  // namespace fermistab
