// SPDX-License-Identifier: Apache-2.0
//
// Forward sensing model Y = H X + Z and the random generators behind it:
// signal batches (Gaussian or orthogonal training) and sensing scenes
// (channel draw + receiver noise).

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "randsense/config.hpp"
#include "randsense/correlation.hpp"
#include "randsense/errors.hpp"
#include "randsense/rng.hpp"

namespace randsense {

enum class SignalKind { gaussian, deterministic_orthogonal };

// N signal realizations S_1..S_N, all n_tx x frame_len, all of one kind.
// Single-kind construction is what rules out mixed batches.
struct SignalBatch {
    std::vector<Eigen::MatrixXcd> samples;
    SignalKind kind = SignalKind::gaussian;

    int count() const { return static_cast<int>(samples.size()); }
};

// gaussian: entries i.i.d. CN(0,1), so each column has covariance I.
// deterministic_orthogonal: sqrt(L) times n_tx orthonormal rows of a Haar
// unitary, so (1/L) S S^H = I exactly; requires frame_len >= n_tx.
// Sample i is drawn from substream(seed, i).
inline SignalBatch sample_signals(const SystemConfig& config, int count,
                                  SignalKind kind, std::uint64_t seed) {
    config.validate();
    if (count < 1) throw InvalidParameterError("sample count must be >= 1");
    const int nt = config.n_tx;
    const int len = config.frame_len;
    if (kind == SignalKind::deterministic_orthogonal && len < nt)
        throw InfeasibleOrthogonalityError(
            "orthogonal training requires frame_len >= n_tx");
    SignalBatch batch;
    batch.kind = kind;
    batch.samples.resize(count);
    for (int n = 0; n < count; ++n) {
        Rng rng(substream(seed, static_cast<std::uint64_t>(n)));
        if (kind == SignalKind::gaussian) {
            Eigen::MatrixXcd s(nt, len);
            for (int j = 0; j < len; ++j)
                for (int i = 0; i < nt; ++i) s(i, j) = rng.cgaussian();
            batch.samples[n] = std::move(s);
        } else {
            const Eigen::MatrixXcd u = haar_unitary(len, rng);
            batch.samples[n] =
                std::sqrt(static_cast<double>(len)) * u.topRows(nt);
        }
    }
    return batch;
}

// One realization of the world: target impulse response and receiver noise.
struct SensingScene {
    Eigen::MatrixXcd channel; // H_s, n_rx x n_tx
    Eigen::MatrixXcd noise;   // Z_s, n_rx x frame_len
};

namespace detail {

// noise_var >= 0 here; the zero-noise limit is used by tests.
inline SensingScene sample_scene_impl(int n_rx, int frame_len,
                                      const CorrelationMatrix& corr,
                                      double noise_var, std::uint64_t seed) {
    if (n_rx < 1 || frame_len < 1)
        throw InvalidParameterError("scene dimensions must be >= 1");
    if (noise_var < 0.0)
        throw InvalidParameterError("noise_var must be >= 0");
    const int nt = corr.dim();
    Rng rng(substream(seed, 0));
    // H = G * (R_H / n_rx)^{1/2} with G i.i.d. CN(0,1): E[H^H H] = R_H.
    Eigen::MatrixXcd g(n_rx, nt);
    for (int j = 0; j < nt; ++j)
        for (int i = 0; i < n_rx; ++i) g(i, j) = rng.cgaussian();
    const Eigen::VectorXd scaled =
        (corr.eigvals() / static_cast<double>(n_rx)).cwiseSqrt();
    const Eigen::MatrixXcd root =
        corr.eigvecs() * scaled.cast<std::complex<double>>().asDiagonal() *
        corr.eigvecs().adjoint();
    SensingScene scene;
    scene.channel = g * root;
    scene.noise = Eigen::MatrixXcd::Zero(n_rx, frame_len);
    if (noise_var > 0.0) {
        const double sigma = std::sqrt(noise_var);
        for (int j = 0; j < frame_len; ++j)
            for (int i = 0; i < n_rx; ++i)
                scene.noise(i, j) = sigma * rng.cgaussian();
    }
    return scene;
}

} // namespace detail

// Channel rows are i.i.d. complex Gaussian with covariance R_H / n_rx, so the
// empirical E[H^H H] converges to R_H; noise entries are i.i.d. CN(0,
// noise_var). Deterministic given seed.
inline SensingScene sample_scene(const SystemConfig& config,
                                 const CorrelationMatrix& corr,
                                 std::uint64_t seed) {
    config.validate();
    if (corr.dim() != config.n_tx)
        throw InvalidParameterError(
            "correlation dimension does not match n_tx");
    return detail::sample_scene_impl(config.n_rx, config.frame_len, corr,
                                     config.noise_var, seed);
}

// Y = H_s X + Z_s.
inline Eigen::MatrixXcd forward_model(const SensingScene& scene,
                                      const Eigen::MatrixXcd& x) {
    if (x.rows() != scene.channel.cols())
        throw InvalidParameterError("signal rows do not match channel columns");
    if (x.cols() != scene.noise.cols())
        throw InvalidParameterError("signal length does not match noise length");
    return scene.channel * x + scene.noise;
}

} // namespace randsense
