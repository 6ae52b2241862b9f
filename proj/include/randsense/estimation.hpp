// SPDX-License-Identifier: Apache-2.0
//
// LMMSE estimation of the target impulse response and the associated error
// functionals. Every (.)^{-1} below is realized as a Hermitian
// positive-definite Cholesky solve; matrices are symmetrized before
// factoring and solve residuals are checked.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "randsense/config.hpp"
#include "randsense/correlation.hpp"
#include "randsense/errors.hpp"
#include "randsense/model.hpp"
#include "randsense/parallel.hpp"

namespace randsense {

// Absolute slack on ||W||_F^2 <= P membership.
inline constexpr double kFeasibilityTol = 1e-9;

// Relative residual beyond which a solve is declared failed.
inline constexpr double kSolveResidualTol = 1e-6;

// Complex n_tx x n_tx precoding matrix W, constrained to the Frobenius power
// ball ||W||_F^2 <= P by the optimizers in precoding.hpp.
struct Precoder {
    Eigen::MatrixXcd matrix;

    double squared_norm() const { return matrix.squaredNorm(); }
};

inline bool in_power_ball(const Precoder& w, double power,
                          double tol = kFeasibilityTol) {
    return w.squared_norm() <= power + tol;
}

// One estimation trial: the estimate, its realized squared error against the
// true channel, and the theoretical conditional MSE for the transmitted X.
struct EstimateReport {
    Eigen::MatrixXcd estimate;
    double squared_error = 0.0;
    double theoretical_mse = 0.0;
};

namespace detail {

inline Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& m) {
    return 0.5 * (m + m.adjoint());
}

// tr(A^{-1}) for Hermitian PD A via Cholesky: with A = L L^H,
// tr(A^{-1}) = ||L^{-1}||_F^2.
inline double trace_inverse_pd(const Eigen::MatrixXcd& a) {
    Eigen::LLT<Eigen::MatrixXcd> llt(symmetrize(a));
    if (llt.info() != Eigen::Success)
        throw NumericalFailureError(
            "matrix is not positive definite within tolerance");
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXcd linv = Eigen::MatrixXcd::Identity(n, n);
    llt.matrixL().solveInPlace(linv);
    return linv.squaredNorm();
}

} // namespace detail

// tr[(R_H^{-1} + gram / (sigma_s^2 N_r))^{-1}] where gram = X X^H. The shared
// core of the conditional and deterministic error expressions.
inline double mse_for_signal_gram(const Eigen::MatrixXcd& gram,
                                  const CorrelationMatrix& corr,
                                  double noise_var, int n_rx) {
    if (gram.rows() != corr.dim() || gram.cols() != corr.dim())
        throw InvalidParameterError("gram dimension does not match correlation");
    if (!(noise_var > 0.0) || n_rx < 1)
        throw InvalidParameterError("noise_var must be > 0 and n_rx >= 1");
    const Eigen::MatrixXcd a =
        corr.inverse() + gram / (noise_var * static_cast<double>(n_rx));
    return detail::trace_inverse_pd(a);
}

// LMMSE estimate of the channel from echoes Y and transmitted X:
//   H_hat = Y (X^H R_H X + sigma_s^2 N_r I_L)^{-1} X^H R_H.
// The L x L system is solved by Cholesky, never inverted explicitly.
inline Eigen::MatrixXcd lmmse_estimate(const Eigen::MatrixXcd& y,
                                       const Eigen::MatrixXcd& x,
                                       const CorrelationMatrix& corr,
                                       double noise_var, int n_rx) {
    if (x.rows() != corr.dim())
        throw InvalidParameterError("signal rows do not match correlation");
    if (y.cols() != x.cols())
        throw InvalidParameterError("echo length does not match signal length");
    if (!(noise_var > 0.0) || n_rx < 1)
        throw InvalidParameterError("noise_var must be > 0 and n_rx >= 1");
    const int len = static_cast<int>(x.cols());
    const Eigen::MatrixXcd xr = x.adjoint() * corr.matrix(); // L x n_tx
    const Eigen::MatrixXcd m = detail::symmetrize(
        xr * x + noise_var * static_cast<double>(n_rx) *
                     Eigen::MatrixXcd::Identity(len, len));
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericalFailureError("LMMSE system is not positive definite");
    const Eigen::MatrixXcd t = llt.solve(xr);
    const double scale = xr.norm();
    if (scale > 0.0 && (m * t - xr).norm() > kSolveResidualTol * scale)
        throw NumericalFailureError("LMMSE solve residual exceeds tolerance");
    return y * t;
}

// Conditional estimation error for a realized signal S:
//   f_hat(W; S) = tr[(R_H^{-1} + (1/(sigma_s^2 N_r)) W S S^H W^H)^{-1}].
inline double conditional_mse(const Precoder& w, const Eigen::MatrixXcd& s,
                              const CorrelationMatrix& corr, double noise_var,
                              int n_rx) {
    if (w.matrix.rows() != corr.dim() || w.matrix.cols() != corr.dim())
        throw InvalidParameterError("precoder dimension does not match");
    if (s.rows() != corr.dim())
        throw InvalidParameterError("signal rows do not match correlation");
    const Eigen::MatrixXcd b = w.matrix * s;
    return mse_for_signal_gram(b * b.adjoint(), corr, noise_var, n_rx);
}

// Error under orthogonal training, (1/L) S S^H = I:
//   J_LMMSE(W) = tr[(R_H^{-1} + (L/(sigma_s^2 N_r)) W W^H)^{-1}].
inline double deterministic_lmmse(const Precoder& w, const SystemConfig& config,
                                  const CorrelationMatrix& corr) {
    config.validate();
    const Eigen::MatrixXcd gram = static_cast<double>(config.frame_len) *
                                  (w.matrix * w.matrix.adjoint());
    return mse_for_signal_gram(gram, corr, config.noise_var, config.n_rx);
}

// End-to-end trial against a known scene: estimate from Y = H X + Z, realized
// squared error, and the theoretical MSE for this X.
inline EstimateReport lmmse_report(const SensingScene& scene,
                                   const Eigen::MatrixXcd& x,
                                   const CorrelationMatrix& corr,
                                   double noise_var) {
    const int n_rx = static_cast<int>(scene.channel.rows());
    const Eigen::MatrixXcd y = forward_model(scene, x);
    EstimateReport report;
    report.estimate = lmmse_estimate(y, x, corr, noise_var, n_rx);
    report.squared_error = (scene.channel - report.estimate).squaredNorm();
    report.theoretical_mse =
        mse_for_signal_gram(x * x.adjoint(), corr, noise_var, n_rx);
    return report;
}

// Monte Carlo oracle for the conditional MSE: averages ||H - H_hat||_F^2 over
// `trials` independent scenes with X = W S held fixed. Trial t draws from
// substream(seed, t); the reduction is a fixed pairwise tree, so the value is
// independent of thread count.
inline double empirical_mse(const Precoder& w, const Eigen::MatrixXcd& s,
                            const SystemConfig& config,
                            const CorrelationMatrix& corr, int trials,
                            std::uint64_t seed) {
    config.validate();
    if (trials < 1) throw InvalidParameterError("trials must be >= 1");
    const Eigen::MatrixXcd x = w.matrix * s;
    std::vector<double> errors(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const SensingScene scene = sample_scene(
            config, corr, substream(seed, static_cast<std::uint64_t>(t)));
        errors[t] = lmmse_report(scene, x, corr, config.noise_var).squared_error;
    });
    return pairwise_mean(errors);
}

} // namespace randsense
