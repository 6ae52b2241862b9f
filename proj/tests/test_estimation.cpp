// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include "oracles.hpp"
#include "randsense/randsense.hpp"

using namespace randsense;

namespace {
SystemConfig make_config(int n_tx, int n_rx, int frame_len,
                         double power = 1000.0, double noise_var = 1.0) {
    SystemConfig cfg;
    cfg.n_tx = n_tx;
    cfg.n_rx = n_rx;
    cfg.frame_len = frame_len;
    cfg.power = power;
    cfg.noise_var = noise_var;
    return cfg;
}
} // namespace

TEST_CASE("lmmse_estimate zero regressor annihilates the estimate") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 1);
    Rng rng(2);
    const Eigen::MatrixXcd y = oracle::random_matrix(2, 8, rng);
    const Eigen::MatrixXcd estimate =
        lmmse_estimate(y, Eigen::MatrixXcd::Zero(4, 8), corr, 1.0, 2);
    REQUIRE(estimate.isZero(0.0));
}

TEST_CASE("lmmse_estimate scalar shrinkage under identity correlation") {
    // R = I, X = sqrt(c) I: H_hat = sqrt(c)/(c + sigma^2 Nr) * Y.
    const int n = 4;
    const double c = 2.5, noise_var = 0.5;
    const int n_rx = 3;
    const CorrelationMatrix corr =
        CorrelationMatrix::from_matrix(Eigen::MatrixXcd::Identity(n, n));
    Rng rng(3);
    const Eigen::MatrixXcd y = oracle::random_matrix(n_rx, n, rng);
    const Eigen::MatrixXcd x =
        std::sqrt(c) * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd estimate = lmmse_estimate(y, x, corr, noise_var, n_rx);
    const Eigen::MatrixXcd expected =
        (std::sqrt(c) / (c + noise_var * n_rx)) * y;
    REQUIRE((estimate - expected).norm() < 1e-12 * expected.norm());
}

TEST_CASE("lmmse_estimate matches the dense-matrix oracle") {
    const CorrelationMatrix corr = gen_correlation(3, 1.0, 10.0, 4);
    const SystemConfig cfg = make_config(3, 3, 6, 10.0, 0.7);
    Rng rng(5);
    const Eigen::MatrixXcd x = oracle::random_matrix(3, 6, rng);
    // Zero-noise scene: the estimate should track H up to shrinkage.
    const SensingScene scene = detail::sample_scene_impl(3, 6, corr, 0.0, 12);
    const Eigen::MatrixXcd y = forward_model(scene, x);
    const Eigen::MatrixXcd mine = lmmse_estimate(y, x, corr, 0.7, 3);
    const Eigen::MatrixXcd ref =
        oracle::dense_lmmse(y, x, corr.matrix(), 0.7, 3);
    REQUIRE((mine - ref).norm() < 1e-10 * ref.norm());
    // Shrinkage bias is bounded; with strong signal the estimate is close.
    REQUIRE((mine - scene.channel).norm() < scene.channel.norm());
}

TEST_CASE("lmmse_estimate validates inputs") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 6);
    const Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2, 8);
    const Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(4, 8);
    REQUIRE_THROWS_AS(lmmse_estimate(y, Eigen::MatrixXcd::Zero(3, 8), corr, 1.0, 2),
                      InvalidParameterError);
    REQUIRE_THROWS_AS(lmmse_estimate(Eigen::MatrixXcd::Zero(2, 7), x, corr, 1.0, 2),
                      InvalidParameterError);
    REQUIRE_THROWS_AS(lmmse_estimate(y, x, corr, 0.0, 2), InvalidParameterError);
}

TEST_CASE("conditional_mse trivial cases") {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
    diag.diagonal() << 1.0, 2.0;
    const CorrelationMatrix corr = CorrelationMatrix::from_matrix(diag);
    const Precoder zero{Eigen::MatrixXcd::Zero(2, 2)};
    const Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(2, 2);
    // W = 0 leaves only R_H^{-1}: the error is tr(R_H) regardless of S.
    REQUIRE(conditional_mse(zero, s, corr, 1.0, 1) == Approx(3.0).margin(1e-12));

    const CorrelationMatrix eye =
        CorrelationMatrix::from_matrix(Eigen::MatrixXcd::Identity(2, 2));
    const Precoder w{Eigen::MatrixXcd::Identity(2, 2)};
    // sigma^2 Nr = 1 and S S^H = I: tr[(I + I)^{-1}] = 1.
    REQUIRE(conditional_mse(w, s, eye, 0.5, 2) == Approx(1.0).margin(1e-12));
}

TEST_CASE("conditional_mse matches the dense-matrix oracle") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 7);
    Rng rng(8);
    const Precoder w = oracle::random_precoder(4, 100.0, rng);
    const Eigen::MatrixXcd s = oracle::random_matrix(4, 4, rng);
    const double mine = conditional_mse(w, s, corr, 1.3, 2);
    const double ref = oracle::dense_mse(w.matrix, s, corr.matrix(), 1.3, 2);
    REQUIRE(mine == Approx(ref).epsilon(1e-10));
}

TEST_CASE("conditional_mse stays within (0, trace] and decreases with scaling") {
    const CorrelationMatrix corr = gen_correlation(5, 1.0, 10.0, 9);
    Rng rng(10);
    for (int k = 0; k < 25; ++k) {
        const Precoder w = oracle::random_precoder(5, 50.0, rng);
        const Eigen::MatrixXcd s = oracle::random_matrix(5, 7, rng);
        const double value = conditional_mse(w, s, corr, 1.0, 2);
        REQUIRE(value > 0.0);
        REQUIRE(value <= corr.trace() + 1e-9);
        for (double alpha : {1.1, 1.5, 2.0}) {
            const Precoder scaled{alpha * w.matrix};
            REQUIRE(conditional_mse(scaled, s, corr, 1.0, 2) <= value + 1e-12);
        }
    }
}

TEST_CASE("deterministic_lmmse trivial and symmetric cases") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 11);
    const SystemConfig cfg = make_config(4, 2, 8);
    const Precoder zero{Eigen::MatrixXcd::Zero(4, 4)};
    REQUIRE(deterministic_lmmse(zero, cfg, corr) ==
            Approx(corr.trace()).epsilon(1e-12));

    // R = lambda I and uniform W: every direction sees the same scalar.
    const double lambda = 3.0;
    const CorrelationMatrix iso = CorrelationMatrix::from_matrix(
        lambda * Eigen::MatrixXcd::Identity(4, 4));
    const Precoder uniform = uniform_precoder(cfg);
    const double expected =
        4.0 / (1.0 / lambda +
               cfg.frame_len * cfg.power / (4.0 * cfg.noise_var * cfg.n_rx));
    REQUIRE(deterministic_lmmse(uniform, cfg, iso) ==
            Approx(expected).epsilon(1e-10));
}

TEST_CASE("deterministic_lmmse equals conditional_mse at orthogonal training") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 12);
    const SystemConfig cfg = make_config(4, 2, 12);
    const SignalBatch train =
        sample_signals(cfg, 1, SignalKind::deterministic_orthogonal, 13);
    Rng rng(14);
    for (int k = 0; k < 10; ++k) {
        const Precoder w = oracle::random_precoder(4, cfg.power, rng);
        const double det = deterministic_lmmse(w, cfg, corr);
        const double cond =
            conditional_mse(w, train.samples[0], corr, cfg.noise_var, cfg.n_rx);
        REQUIRE(det == Approx(cond).margin(1e-9));
    }
}

TEST_CASE("empirical_mse agrees with the theoretical conditional MSE") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 15);
    const SystemConfig cfg = make_config(4, 2, 8, 31.6, 1.0);
    const SignalBatch batch = sample_signals(cfg, 1, SignalKind::gaussian, 16);
    const Precoder w = water_filling(cfg, corr).precoder;
    const double theory =
        conditional_mse(w, batch.samples[0], corr, cfg.noise_var, cfg.n_rx);
    const double empirical =
        empirical_mse(w, batch.samples[0], cfg, corr, 20000, 17);
    REQUIRE(empirical == Approx(theory).epsilon(0.03));
}

TEST_CASE("empirical_mse with zero precoder estimates the channel energy") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 18);
    const SystemConfig cfg = make_config(4, 2, 8);
    const Precoder zero{Eigen::MatrixXcd::Zero(4, 4)};
    const Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(4, 8);
    const double value = empirical_mse(zero, s, cfg, corr, 4000, 19);
    REQUIRE(value == Approx(corr.trace()).epsilon(0.05));
}

TEST_CASE("empirical_mse is deterministic in the seed") {
    const CorrelationMatrix corr = gen_correlation(3, 1.0, 10.0, 20);
    const SystemConfig cfg = make_config(3, 2, 4);
    Rng rng(21);
    const Precoder w = oracle::random_precoder(3, cfg.power, rng);
    const Eigen::MatrixXcd s = oracle::random_matrix(3, 4, rng);
    const double a = empirical_mse(w, s, cfg, corr, 200, 22);
    const double b = empirical_mse(w, s, cfg, corr, 200, 22);
    REQUIRE(a == b);
}

TEST_CASE("lmmse_report carries consistent diagnostics") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 23);
    const SystemConfig cfg = make_config(4, 2, 8);
    const SensingScene scene = sample_scene(cfg, corr, 24);
    Rng rng(25);
    const Eigen::MatrixXcd x = oracle::random_matrix(4, 8, rng);
    const EstimateReport report = lmmse_report(scene, x, corr, cfg.noise_var);
    REQUIRE(report.squared_error >= 0.0);
    REQUIRE(report.theoretical_mse > 0.0);
    REQUIRE(report.theoretical_mse <= corr.trace() + 1e-9);
    REQUIRE(report.estimate.rows() == 2);
    REQUIRE(report.estimate.cols() == 4);
}

TEST_CASE("precoder power-ball membership helper") {
    Precoder w{2.0 * Eigen::MatrixXcd::Identity(2, 2)};
    REQUIRE(w.squared_norm() == Approx(8.0));
    REQUIRE(in_power_ball(w, 8.0));
    REQUIRE(in_power_ball(w, 8.0 - 1e-10));
    REQUIRE_FALSE(in_power_ball(w, 7.9));
}
