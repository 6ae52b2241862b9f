// SPDX-License-Identifier: Apache-2.0
//
// The three precoder constructions:
//   * water-filling over the correlation eigendirections (the
//     deterministic-training optimum),
//   * data-dependent successive convex approximation, one precoder per
//     signal realization,
//   * data-independent stochastic gradient projection, one precoder trained
//     offline on locally generated signal samples,
// plus their shared primitives: the conditional-MSE gradient, the
// closed-form linearized subproblem, exact line search, and projection onto
// the Frobenius power ball.

#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "randsense/config.hpp"
#include "randsense/correlation.hpp"
#include "randsense/elmmse.hpp"
#include "randsense/errors.hpp"
#include "randsense/estimation.hpp"
#include "randsense/model.hpp"
#include "randsense/parallel.hpp"
#include "randsense/rng.hpp"

namespace randsense {

// Real inner product on complex matrices: <A,B> = Re tr(A^H B).
inline double frobenius_inner(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b) {
    return a.cwiseProduct(b.conjugate()).sum().real();
}

// sqrt(P/n_tx) * I, the uniform-allocation feasible point.
inline Precoder uniform_precoder(const SystemConfig& config) {
    config.validate();
    const double scale = std::sqrt(config.power / config.n_tx);
    return Precoder{scale *
                    Eigen::MatrixXcd::Identity(config.n_tx, config.n_tx)};
}

struct WaterFillingResult {
    Precoder precoder;
    double water_level = 0.0;      // mu_0
    std::vector<bool> active_set;  // directions with mu_0 - 1/lambda_i > 0
};

// Water-filling optimum of the deterministic-training error:
//   W = sqrt(sigma_s^2 N_r / L) Q [(mu_0 I - Lambda^{-1})^+]^{1/2},
// with mu_0 the root of the monotone power curve
//   p(mu) = (sigma_s^2 N_r / L) sum_i (mu - 1/lambda_i)^+  =  P,
// located by bisection. p is continuous, nondecreasing and unbounded, so the
// bracket below always contains the root.
inline WaterFillingResult water_filling(const SystemConfig& config,
                                        const CorrelationMatrix& corr) {
    config.validate();
    if (corr.dim() != config.n_tx)
        throw InvalidParameterError("correlation dimension does not match n_tx");
    const int n = corr.dim();
    const double c = config.noise_var * static_cast<double>(config.n_rx) /
                     static_cast<double>(config.frame_len);
    const Eigen::VectorXd inv_lambda = corr.eigvals().cwiseInverse();
    const auto power_at = [&](double mu) {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            total += std::max(mu - inv_lambda(i), 0.0);
        return c * total;
    };
    double lo = inv_lambda.minCoeff(); // p(lo) = 0
    double hi = inv_lambda.maxCoeff() + config.power / (c * n); // p(hi) >= P
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (power_at(mid) < config.power ? lo : hi) = mid;
    }
    const double mu0 = 0.5 * (lo + hi);

    WaterFillingResult result;
    result.water_level = mu0;
    result.active_set.resize(n);
    Eigen::VectorXd gains(n);
    for (int i = 0; i < n; ++i) {
        const double depth = mu0 - inv_lambda(i);
        result.active_set[i] = depth > 0.0;
        gains(i) = std::sqrt(c * std::max(depth, 0.0));
    }
    result.precoder.matrix =
        corr.eigvecs() * gains.cast<std::complex<double>>().asDiagonal();
    return result;
}

// f_hat(W; S) and its gradient from one Cholesky factorization of
//   A = R_H^{-1} + (1/(sigma_s^2 N_r)) W S S^H W^H.
struct ValueGradient {
    double value = 0.0;
    Eigen::MatrixXcd gradient;
};

// Gradient of f_hat under <A,B> = Re tr(A^H B):
//   grad f_hat = -(2/(sigma_s^2 N_r)) A^{-2} W S S^H.
// The factor of two relative to the one-sided matrix differential makes the
// finite-difference identity d/dh f(W + hD) = <grad, D> exact; only the
// direction matters to the optimizers.
inline ValueGradient mse_value_and_gradient(const Precoder& w,
                                            const Eigen::MatrixXcd& s,
                                            const CorrelationMatrix& corr,
                                            double noise_var, int n_rx) {
    if (w.matrix.rows() != corr.dim() || w.matrix.cols() != corr.dim())
        throw InvalidParameterError("precoder dimension does not match");
    if (s.rows() != corr.dim())
        throw InvalidParameterError("signal rows do not match correlation");
    if (!(noise_var > 0.0) || n_rx < 1)
        throw InvalidParameterError("noise_var must be > 0 and n_rx >= 1");
    const double scale = noise_var * static_cast<double>(n_rx);
    const Eigen::MatrixXcd b = w.matrix * s; // n_tx x L
    const Eigen::MatrixXcd a =
        detail::symmetrize(corr.inverse() + (b * b.adjoint()) / scale);
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalFailureError(
            "conditional-MSE matrix is not positive definite");
    const int n = corr.dim();
    Eigen::MatrixXcd linv = Eigen::MatrixXcd::Identity(n, n);
    llt.matrixL().solveInPlace(linv);
    ValueGradient out;
    out.value = linv.squaredNorm(); // tr(A^{-1})
    const Eigen::MatrixXcd wc = b * s.adjoint(); // W S S^H
    out.gradient = -(2.0 / scale) * llt.solve(llt.solve(wc));
    return out;
}

inline Eigen::MatrixXcd elmmse_gradient(const Precoder& w,
                                        const Eigen::MatrixXcd& s,
                                        const CorrelationMatrix& corr,
                                        double noise_var, int n_rx) {
    return mse_value_and_gradient(w, s, corr, noise_var, n_rx).gradient;
}

// Minimizer of the linearized objective <G, W - W_t> over the power ball:
// W' = -sqrt(P) G / ||G||_F, by Cauchy-Schwarz. A vanishing gradient means
// W_t is stationary and is returned unchanged.
inline Precoder sca_subproblem(const Eigen::MatrixXcd& gradient, double power,
                               const Precoder& current) {
    if (!(power > 0.0)) throw InvalidParameterError("power must be > 0");
    const double gnorm = gradient.norm();
    if (gnorm == 0.0) return current;
    return Precoder{(-std::sqrt(power) / gnorm) * gradient};
}

// Projection onto {W : ||W||_F^2 <= P}: rescale radially if outside.
inline Precoder project_to_ball(const Eigen::MatrixXcd& w, double power) {
    if (!(power > 0.0)) throw InvalidParameterError("power must be > 0");
    const double sq = w.squaredNorm();
    if (sq <= power) return Precoder{w};
    return Precoder{w * std::sqrt(power / sq)};
}

struct LineSearchResult {
    double step = 0.0;      // delta in [0,1]
    double objective = 0.0; // f_hat at the accepted point
};

// Exact line search of phi(delta) = f_hat(W_t + delta (W' - W_t); S) over
// [0,1]: a coarse grid (smallest delta wins ties) followed by golden-section
// refinement on the bracketing interval. The returned objective never
// exceeds phi(0) because delta = 0 is on the grid.
inline LineSearchResult exact_line_search(const Precoder& w_t,
                                          const Precoder& w_prime,
                                          const Eigen::MatrixXcd& s,
                                          const CorrelationMatrix& corr,
                                          double noise_var, int n_rx,
                                          int grid_points = 33,
                                          int refine_iters = 40) {
    if (grid_points < 2)
        throw InvalidParameterError("line search needs at least 2 grid points");
    const Eigen::MatrixXcd dir = w_prime.matrix - w_t.matrix;
    const auto phi = [&](double delta) {
        return conditional_mse(Precoder{w_t.matrix + delta * dir}, s, corr,
                               noise_var, n_rx);
    };
    if (dir.norm() == 0.0) return {0.0, phi(0.0)};

    double best_delta = 0.0;
    double best_value = phi(0.0);
    int best_index = 0;
    const double spacing = 1.0 / static_cast<double>(grid_points - 1);
    for (int k = 1; k < grid_points; ++k) {
        const double delta = static_cast<double>(k) * spacing;
        const double value = phi(delta);
        if (value < best_value) {
            best_value = value;
            best_delta = delta;
            best_index = k;
        }
    }

    double lo = std::max(0.0, (best_index - 1) * spacing);
    double hi = std::min(1.0, (best_index + 1) * spacing);
    constexpr double kInvPhi = 0.6180339887498949; // 1/golden ratio
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = phi(x1);
    double f2 = phi(x2);
    for (int it = 0; it < refine_iters; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = phi(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = phi(x2);
        }
        const double candidate = f1 <= f2 ? f1 : f2;
        const double at = f1 <= f2 ? x1 : x2;
        if (candidate < best_value) {
            best_value = candidate;
            best_delta = at;
        }
    }
    return {best_delta, best_value};
}

// Per-iteration record of either optimizer. For SCA, descent_gap is the
// linearized-model value g(W') <= 0; for SGP it is the mini-batch gradient
// norm.
struct IterationRecord {
    int index = 0;
    double objective = 0.0;
    double step_size = 0.0;
    double descent_gap = 0.0;
};

struct ConvergenceTrace {
    std::vector<IterationRecord> iterations;
    double wall_clock = 0.0; // seconds
};

struct ScaConfig {
    int max_iters = 30;        // t_max
    double stop_gap = -0.1;    // xi < 0
    int line_search_grid = 33;
    int line_search_refine = 40;

    void validate() const {
        if (max_iters < 1) throw InvalidParameterError("sca max_iters must be >= 1");
        if (!(stop_gap < 0.0))
            throw InvalidParameterError("sca stop_gap must be < 0");
        if (line_search_grid < 2)
            throw InvalidParameterError("line_search_grid must be >= 2");
        if (line_search_refine < 0)
            throw InvalidParameterError("line_search_refine must be >= 0");
    }

    bool operator==(const ScaConfig&) const = default;
};

struct SgpConfig {
    int batch_size = 10;   // |D^(r)|
    int max_iters = 2000;  // r_max
    double tol = 1e-5;     // epsilon
    double step_a = 10.0;  // eta^(r) = a / (a + r)

    void validate() const {
        if (batch_size < 1) throw InvalidParameterError("sgp batch_size must be >= 1");
        if (max_iters < 1) throw InvalidParameterError("sgp max_iters must be >= 1");
        if (!(tol > 0.0)) throw InvalidParameterError("sgp tol must be > 0");
        if (!(step_a > 0.0)) throw InvalidParameterError("sgp step_a must be > 0");
    }

    bool operator==(const SgpConfig&) const = default;
};

// Successive convex approximation on one signal realization: linearize, solve
// the ball-constrained subproblem in closed form, exact line search, repeat.
// Stops once the descent gap g(W') = <grad, W' - W_t> rises above the
// (negative) stop_gap, i.e. the linear model predicts less than |xi|
// improvement, or after max_iters updates. The objective trace is
// non-increasing; the final record holds the terminal objective.
inline std::pair<Precoder, ConvergenceTrace>
sca_optimize(const Eigen::MatrixXcd& s, const Precoder& init,
             const ScaConfig& cfg, const SystemConfig& config,
             const CorrelationMatrix& corr) {
    cfg.validate();
    config.validate();
    if (!in_power_ball(init, config.power))
        throw InvalidParameterError("initial precoder is infeasible");
    const auto start = std::chrono::steady_clock::now();
    Precoder w = init;
    ConvergenceTrace trace;
    for (int t = 0;; ++t) {
        const ValueGradient vg = mse_value_and_gradient(
            w, s, corr, config.noise_var, config.n_rx);
        const Precoder candidate = sca_subproblem(vg.gradient, config.power, w);
        const double gap = frobenius_inner(vg.gradient, candidate.matrix - w.matrix);
        if (gap >= cfg.stop_gap || t == cfg.max_iters) {
            trace.iterations.push_back({t, vg.value, 0.0, gap});
            break;
        }
        const LineSearchResult ls = exact_line_search(
            w, candidate, s, corr, config.noise_var, config.n_rx,
            cfg.line_search_grid, cfg.line_search_refine);
        trace.iterations.push_back({t, vg.value, ls.step, gap});
        w.matrix += ls.step * (candidate.matrix - w.matrix);
    }
    trace.wall_clock =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return {std::move(w), std::move(trace)};
}

// Data-dependent precoding: one SCA run per batch sample, in parallel, and
// the resulting sample-average objective (1/N) sum_n f_hat(W_n*; S_n).
// Each run is deterministic in its inputs, so the outcome does not depend on
// execution order or thread count.
inline std::pair<std::vector<Precoder>, double>
data_dependent_suite(const SignalBatch& batch, const Precoder& init,
                     const ScaConfig& cfg, const SystemConfig& config,
                     const CorrelationMatrix& corr) {
    if (batch.count() < 1)
        throw InvalidParameterError("signal batch must be nonempty");
    const std::size_t n = static_cast<std::size_t>(batch.count());
    std::vector<Precoder> precoders(n);
    std::vector<double> objectives(n);
    parallel_for(n, [&](std::size_t i) {
        auto [w, trace] = sca_optimize(batch.samples[i], init, cfg, config, corr);
        objectives[i] = trace.iterations.back().objective;
        precoders[i] = std::move(w);
    });
    return {std::move(precoders), pairwise_mean(objectives)};
}

// Stochastic gradient projection for the data-independent precoder. Each
// iteration draws a fresh mini-batch of Gaussian signal samples from
// substream(seed, r), averages the per-sample gradients, steps with
// eta^(r) = a/(a+r) and projects back onto the power ball. Stopping compares
// trailing window-20 means of the per-batch objective taken 20 iterations
// apart (non-overlapping data), so mini-batch noise does not fire the
// epsilon test spuriously. The trace records the per-batch objective, step
// size and mini-batch gradient norm.
inline std::pair<Precoder, ConvergenceTrace>
sgp_optimize(const SystemConfig& config, const CorrelationMatrix& corr,
             const Precoder& init, const SgpConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    config.validate();
    if (corr.dim() != config.n_tx)
        throw InvalidParameterError("correlation dimension does not match n_tx");
    if (!in_power_ball(init, config.power))
        throw InvalidParameterError("initial precoder is infeasible");
    constexpr int kWindow = 20;
    const auto start = std::chrono::steady_clock::now();
    Precoder w = init;
    ConvergenceTrace trace;
    std::vector<double> history;
    std::deque<double> smoothed;
    for (int r = 1; r <= cfg.max_iters; ++r) {
        const SignalBatch batch =
            sample_signals(config, cfg.batch_size, SignalKind::gaussian,
                           substream(seed, static_cast<std::uint64_t>(r)));
        const std::size_t bs = static_cast<std::size_t>(cfg.batch_size);
        std::vector<double> values(bs);
        std::vector<Eigen::MatrixXcd> grads(bs);
        parallel_for(bs, [&](std::size_t i) {
            ValueGradient vg = mse_value_and_gradient(
                w, batch.samples[i], corr, config.noise_var, config.n_rx);
            values[i] = vg.value;
            grads[i] = std::move(vg.gradient);
        });
        Eigen::MatrixXcd grad = grads[0];
        for (std::size_t i = 1; i < bs; ++i) grad += grads[i];
        grad /= static_cast<double>(bs);
        const double objective = pairwise_mean(values);
        const double eta = cfg.step_a / (cfg.step_a + static_cast<double>(r));
        trace.iterations.push_back({r, objective, eta, grad.norm()});
        w = project_to_ball(w.matrix - eta * grad, config.power);

        history.push_back(objective);
        if (static_cast<int>(history.size()) >= kWindow) {
            double mean = 0.0;
            for (std::size_t i = history.size() - kWindow; i < history.size(); ++i)
                mean += history[i];
            smoothed.push_back(mean / kWindow);
            if (static_cast<int>(smoothed.size()) > kWindow) {
                const double improvement =
                    smoothed[smoothed.size() - 1 - kWindow] - smoothed.back();
                if (improvement < cfg.tol) break;
            }
        }
    }
    trace.wall_clock =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return {std::move(w), std::move(trace)};
}

} // namespace randsense
