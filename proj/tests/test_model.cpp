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

TEST_CASE("gen_correlation degenerate eigenvalue interval gives identity") {
    const CorrelationMatrix corr = gen_correlation(2, 1.0, 1.0, 42);
    REQUIRE((corr.matrix() - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("gen_correlation eigenvalue sample mean near uniform mean") {
    const CorrelationMatrix corr = gen_correlation(64, 1.0, 10.0, 7);
    const double mean = corr.eigvals().mean();
    REQUIRE(mean > 4.5);
    REQUIRE(mean < 6.5);
}

TEST_CASE("gen_correlation equal eigenvalues force the trace") {
    const CorrelationMatrix corr = gen_correlation(4, 2.0, 2.0, 3);
    REQUIRE(corr.matrix().trace().real() == Approx(8.0).margin(1e-9));
}

TEST_CASE("gen_correlation rejects non-positive eig_low") {
    REQUIRE_THROWS_AS(gen_correlation(4, 0.0, 1.0, 1), InvalidParameterError);
    REQUIRE_THROWS_AS(gen_correlation(4, -1.0, 1.0, 1), InvalidParameterError);
    REQUIRE_THROWS_AS(gen_correlation(4, 2.0, 1.0, 1), InvalidParameterError);
}

TEST_CASE("gen_correlation output is Hermitian PSD with bounded spectrum") {
    for (std::uint64_t seed : {1ull, 17ull, 901ull}) {
        const CorrelationMatrix corr = gen_correlation(8, 1.0, 10.0, seed);
        const Eigen::MatrixXcd& m = corr.matrix();
        REQUIRE((m - m.adjoint()).norm() <= 1e-10 * m.norm());
        REQUIRE(corr.eigvals().minCoeff() >= 1.0 - 1e-12);
        REQUIRE(corr.eigvals().maxCoeff() <= 10.0 + 1e-12);
        // descending order and reconstruction
        for (int i = 1; i < 8; ++i)
            REQUIRE(corr.eigvals()(i) <= corr.eigvals()(i - 1));
        const Eigen::MatrixXcd rebuilt =
            corr.eigvecs() *
            corr.eigvals().cast<std::complex<double>>().asDiagonal() *
            corr.eigvecs().adjoint();
        REQUIRE((rebuilt - m).norm() <= 1e-8 * m.norm());
    }
}

TEST_CASE("gen_correlation is deterministic in the seed") {
    const CorrelationMatrix a = gen_correlation(6, 1.0, 10.0, 55);
    const CorrelationMatrix b = gen_correlation(6, 1.0, 10.0, 55);
    REQUIRE((a.matrix().array() == b.matrix().array()).all());
    const CorrelationMatrix c = gen_correlation(6, 1.0, 10.0, 56);
    REQUIRE((a.matrix() - c.matrix()).norm() > 1e-6);
}

TEST_CASE("sample_signals deterministic orthogonal at L = n_tx") {
    const SignalBatch batch = sample_signals(
        make_config(2, 2, 2), 1, SignalKind::deterministic_orthogonal, 5);
    const Eigen::MatrixXcd& s = batch.samples[0];
    REQUIRE((s * s.adjoint() - 2.0 * Eigen::MatrixXcd::Identity(2, 2)).norm() <
            1e-8);
}

TEST_CASE("sample_signals orthogonality holds for L > n_tx") {
    const SystemConfig cfg = make_config(4, 2, 16);
    const SignalBatch batch =
        sample_signals(cfg, 3, SignalKind::deterministic_orthogonal, 11);
    for (const auto& s : batch.samples) {
        REQUIRE(s.rows() == 4);
        REQUIRE(s.cols() == 16);
        REQUIRE((s * s.adjoint() / 16.0 - Eigen::MatrixXcd::Identity(4, 4))
                    .norm() < 1e-8);
    }
}

TEST_CASE("sample_signals rejects orthogonal kind with short frames") {
    REQUIRE_THROWS_AS(sample_signals(make_config(8, 2, 4), 1,
                                     SignalKind::deterministic_orthogonal, 1),
                      InfeasibleOrthogonalityError);
}

TEST_CASE("sample_signals gaussian law of large numbers") {
    const SystemConfig cfg = make_config(8, 4, 64);
    const SignalBatch batch = sample_signals(cfg, 1000, SignalKind::gaussian, 9);
    Eigen::MatrixXcd entry_mean = Eigen::MatrixXcd::Zero(8, 64);
    Eigen::MatrixXcd gram_mean = Eigen::MatrixXcd::Zero(8, 8);
    for (const auto& s : batch.samples) {
        entry_mean += s;
        gram_mean += s * s.adjoint() / 64.0;
    }
    entry_mean /= 1000.0;
    gram_mean /= 1000.0;
    REQUIRE(entry_mean.cwiseAbs().mean() < 0.05);
    REQUIRE((gram_mean - Eigen::MatrixXcd::Identity(8, 8))
                .cwiseAbs()
                .maxCoeff() < 0.15);
}

TEST_CASE("sample_signals is deterministic in the seed") {
    const SystemConfig cfg = make_config(4, 2, 8);
    const SignalBatch a = sample_signals(cfg, 3, SignalKind::gaussian, 71);
    const SignalBatch b = sample_signals(cfg, 3, SignalKind::gaussian, 71);
    for (int i = 0; i < 3; ++i)
        REQUIRE((a.samples[i].array() == b.samples[i].array()).all());
}

TEST_CASE("sample_signals gaussian shape contract") {
    const SignalBatch batch =
        sample_signals(make_config(8, 4, 8), 4, SignalKind::gaussian, 2);
    REQUIRE(batch.count() == 4);
    for (const auto& s : batch.samples) {
        REQUIRE(s.rows() == 8);
        REQUIRE(s.cols() == 8);
        REQUIRE(s.allFinite());
    }
}

TEST_CASE("sample_scene realizes the target correlation") {
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
    diag.diagonal() << 1.0, 2.0, 3.0, 4.0;
    const CorrelationMatrix corr = CorrelationMatrix::from_matrix(diag);
    const SystemConfig cfg = make_config(4, 2, 8);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
    const int draws = 5000;
    for (int t = 0; t < draws; ++t) {
        const SensingScene scene = sample_scene(cfg, corr, substream(123, t));
        acc += scene.channel.adjoint() * scene.channel;
    }
    acc /= static_cast<double>(draws);
    REQUIRE((acc - corr.matrix()).norm() < 0.05 * corr.matrix().norm());
}

TEST_CASE("sample_scene empirical error halves when draws quadruple") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 31);
    const SystemConfig cfg = make_config(4, 2, 4);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
    double err_1k = 0.0, err_4k = 0.0;
    for (int t = 0; t < 4000; ++t) {
        const SensingScene scene = sample_scene(cfg, corr, substream(77, t));
        acc += scene.channel.adjoint() * scene.channel;
        if (t + 1 == 1000)
            err_1k = (acc / 1000.0 - corr.matrix()).norm() / corr.matrix().norm();
    }
    err_4k = (acc / 4000.0 - corr.matrix()).norm() / corr.matrix().norm();
    const double ratio = err_4k / err_1k;
    REQUIRE(ratio > 0.25);
    REQUIRE(ratio < 0.75);
}

TEST_CASE("sample_scene zero-noise limit is exact") {
    const CorrelationMatrix corr = gen_correlation(3, 1.0, 5.0, 8);
    const SensingScene scene = detail::sample_scene_impl(2, 6, corr, 0.0, 99);
    REQUIRE(scene.noise.isZero(0.0));
    REQUIRE(scene.channel.allFinite());
}

TEST_CASE("sample_scene is deterministic in the seed") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 5);
    const SystemConfig cfg = make_config(4, 2, 8);
    const SensingScene a = sample_scene(cfg, corr, 1234);
    const SensingScene b = sample_scene(cfg, corr, 1234);
    REQUIRE((a.channel.array() == b.channel.array()).all());
    REQUIRE((a.noise.array() == b.noise.array()).all());
}

TEST_CASE("sample_scene rejects mismatched correlation dimension") {
    const CorrelationMatrix corr = gen_correlation(3, 1.0, 10.0, 5);
    REQUIRE_THROWS_AS(sample_scene(make_config(4, 2, 8), corr, 1),
                      InvalidParameterError);
}

TEST_CASE("forward_model zero input returns the noise") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 21);
    const SensingScene scene = sample_scene(make_config(4, 2, 8), corr, 4);
    const Eigen::MatrixXcd y =
        forward_model(scene, Eigen::MatrixXcd::Zero(4, 8));
    REQUIRE((y - scene.noise).norm() == 0.0);
}

TEST_CASE("forward_model identity channel passes the signal through") {
    SensingScene scene;
    scene.channel = Eigen::MatrixXcd::Identity(3, 3);
    scene.noise = Eigen::MatrixXcd::Zero(3, 5);
    Rng rng(6);
    const Eigen::MatrixXcd x = oracle::random_matrix(3, 5, rng);
    REQUIRE((forward_model(scene, x) - x).norm() == 0.0);
}

TEST_CASE("forward_model matches independent arithmetic") {
    Rng rng(14);
    SensingScene scene;
    scene.channel = oracle::random_matrix(2, 2, rng);
    scene.noise = oracle::random_matrix(2, 2, rng);
    const Eigen::MatrixXcd x = oracle::random_matrix(2, 2, rng);
    Eigen::MatrixXcd expected(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::complex<double> sum = scene.noise(i, j);
            for (int k = 0; k < 2; ++k) sum += scene.channel(i, k) * x(k, j);
            expected(i, j) = sum;
        }
    REQUIRE((forward_model(scene, x) - expected).norm() < 1e-14);
}

TEST_CASE("forward_model rejects inconsistent dimensions") {
    const CorrelationMatrix corr = gen_correlation(4, 1.0, 10.0, 2);
    const SensingScene scene = sample_scene(make_config(4, 2, 8), corr, 3);
    REQUIRE_THROWS_AS(forward_model(scene, Eigen::MatrixXcd::Zero(3, 8)),
                      InvalidParameterError);
    REQUIRE_THROWS_AS(forward_model(scene, Eigen::MatrixXcd::Zero(4, 7)),
                      InvalidParameterError);
}

TEST_CASE("system config validation") {
    SystemConfig cfg = make_config(4, 2, 8);
    REQUIRE_NOTHROW(cfg.validate());
    REQUIRE(cfg.transmit_snr() == Approx(8 * 1000.0 / 1.0));
    cfg.noise_var = 0.0;
    REQUIRE_THROWS_AS(cfg.validate(), InvalidParameterError);
    cfg = make_config(0, 2, 8);
    REQUIRE_THROWS_AS(cfg.validate(), InvalidParameterError);
}
