// SPDX-License-Identifier: Apache-2.0
//
// Ergodic LMMSE: the conditional error averaged over random signal
// realizations, estimated by sample averaging, plus its Jensen lower bound
// (the orthogonal-training error).

#pragma once

#include <cmath>
#include <vector>

#include "randsense/estimation.hpp"
#include "randsense/parallel.hpp"

namespace randsense {

// Sample-average ELMMSE over a signal batch.
struct ElmmseEstimate {
    double mean = 0.0;      // (1/N) sum_n f_hat(W; S_n)
    double std_error = 0.0; // sample std / sqrt(N); 0 for N = 1
    int count = 0;
};

// Averages conditional_mse(W, S_n) over the batch. Parallel over samples;
// the pairwise reduction keeps the result independent of thread count.
inline ElmmseEstimate monte_carlo_elmmse(const Precoder& w,
                                         const SignalBatch& batch,
                                         const SystemConfig& config,
                                         const CorrelationMatrix& corr) {
    config.validate();
    if (batch.count() < 1)
        throw InvalidParameterError("signal batch must be nonempty");
    const std::size_t n = static_cast<std::size_t>(batch.count());
    std::vector<double> values(n);
    parallel_for(n, [&](std::size_t i) {
        values[i] = conditional_mse(w, batch.samples[i], corr,
                                    config.noise_var, config.n_rx);
    });
    ElmmseEstimate est;
    est.count = batch.count();
    est.mean = pairwise_mean(values);
    if (n > 1) {
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = values[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

// Jensen's inequality gives ELMMSE >= J_LMMSE(W): the deterministic-training
// error lower-bounds the ergodic one, with equality for orthogonal signals.
inline double jensen_bound(const Precoder& w, const SystemConfig& config,
                           const CorrelationMatrix& corr) {
    return deterministic_lmmse(w, config, corr);
}

} // namespace randsense
