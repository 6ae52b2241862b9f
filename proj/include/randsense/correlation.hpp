// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "randsense/errors.hpp"
#include "randsense/rng.hpp"

namespace randsense {

inline constexpr double kHermitianTol = 1e-10;  // relative Frobenius
inline constexpr double kReconstructTol = 1e-8; // relative Frobenius

// Haar-distributed random unitary: QR of a Ginibre matrix with the R-diagonal
// phases folded into Q (Mezzadri's recipe).
inline Eigen::MatrixXcd haar_unitary(int n, Rng& rng) {
    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& packed = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> r = packed(j, j);
        const double mag = std::abs(r);
        q.col(j) *= (mag > 0.0) ? r / mag : std::complex<double>(1.0, 0.0);
    }
    return q;
}

// Hermitian positive definite channel correlation R_H with its
// eigendecomposition Q diag(lambda) Q^H cached (eigenvalues descending).
// The inverse is precomputed from the eigensystem; estimation and precoding
// read it on every evaluation.
class CorrelationMatrix {
public:
    // Eigendecomposes a given Hermitian matrix.
    static CorrelationMatrix from_matrix(const Eigen::MatrixXcd& m) {
        if (m.rows() != m.cols() || m.rows() < 1)
            throw InvalidParameterError("correlation matrix must be square");
        const double scale = m.norm();
        if (!(scale > 0.0) || (m - m.adjoint()).norm() > kHermitianTol * scale)
            throw InvalidParameterError(
                "correlation matrix must be Hermitian within tolerance");
        const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
        if (es.info() != Eigen::Success)
            throw NumericalFailureError("eigendecomposition failed");
        const int n = static_cast<int>(m.rows());
        Eigen::VectorXd vals(n);
        Eigen::MatrixXcd vecs(n, n);
        for (int i = 0; i < n; ++i) { // ascending -> descending
            vals(i) = es.eigenvalues()(n - 1 - i);
            vecs.col(i) = es.eigenvectors().col(n - 1 - i);
        }
        return CorrelationMatrix(sym, std::move(vecs), std::move(vals));
    }

    // Builds Q diag(lambda) Q^H from a unitary and positive eigenvalues.
    static CorrelationMatrix from_eigensystem(Eigen::MatrixXcd q,
                                              Eigen::VectorXd lambda) {
        const int n = static_cast<int>(q.rows());
        if (q.cols() != n || n < 1 || lambda.size() != n)
            throw InvalidParameterError("eigensystem dimensions inconsistent");
        if ((q.adjoint() * q - Eigen::MatrixXcd::Identity(n, n)).norm() >
            1e-8 * std::sqrt(static_cast<double>(n)))
            throw InvalidParameterError("eigenvector matrix is not unitary");
        // Sort descending, carrying columns along.
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return lambda(a) > lambda(b); });
        Eigen::VectorXd vals(n);
        Eigen::MatrixXcd vecs(n, n);
        for (int i = 0; i < n; ++i) {
            vals(i) = lambda(order[i]);
            vecs.col(i) = q.col(order[i]);
        }
        Eigen::MatrixXcd m =
            vecs * vals.cast<std::complex<double>>().asDiagonal() * vecs.adjoint();
        m = 0.5 * (m + m.adjoint());
        return CorrelationMatrix(std::move(m), std::move(vecs), std::move(vals));
    }

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const Eigen::MatrixXcd& eigvecs() const { return eigvecs_; }
    const Eigen::VectorXd& eigvals() const { return eigvals_; }
    const Eigen::MatrixXcd& inverse() const { return inverse_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    double trace() const { return eigvals_.sum(); }

private:
    CorrelationMatrix(Eigen::MatrixXcd m, Eigen::MatrixXcd vecs,
                      Eigen::VectorXd vals)
        : matrix_(std::move(m)), eigvecs_(std::move(vecs)),
          eigvals_(std::move(vals)) {
        if (!(eigvals_.minCoeff() > 0.0))
            throw InvalidParameterError(
                "correlation matrix must be positive definite");
        const Eigen::MatrixXcd rebuilt =
            eigvecs_ * eigvals_.cast<std::complex<double>>().asDiagonal() *
            eigvecs_.adjoint();
        if ((rebuilt - matrix_).norm() > kReconstructTol * matrix_.norm())
            throw NumericalFailureError(
                "eigendecomposition does not reconstruct the matrix");
        inverse_ = eigvecs_ *
                   eigvals_.cwiseInverse().cast<std::complex<double>>().asDiagonal() *
                   eigvecs_.adjoint();
        inverse_ = 0.5 * (inverse_ + inverse_.adjoint());
    }

    Eigen::MatrixXcd matrix_;
    Eigen::MatrixXcd eigvecs_;
    Eigen::VectorXd eigvals_;
    Eigen::MatrixXcd inverse_;
};

// Random correlation with eigenvalues i.i.d. uniform on [eig_low, eig_high]
// and a Haar-random eigenbasis. Deterministic in `seed`: the eigenvalues are
// drawn first (n draws), then the unitary.
inline CorrelationMatrix gen_correlation(int n_tx, double eig_low,
                                         double eig_high, std::uint64_t seed) {
    if (n_tx < 1) throw InvalidParameterError("n_tx must be >= 1");
    if (!(eig_low > 0.0))
        throw InvalidParameterError("eig_low must be > 0");
    if (eig_high < eig_low)
        throw InvalidParameterError("eig_high must be >= eig_low");
    Rng rng(substream(seed, 0));
    Eigen::VectorXd vals(n_tx);
    for (int i = 0; i < n_tx; ++i) vals(i) = rng.uniform(eig_low, eig_high);
    Eigen::MatrixXcd q = haar_unitary(n_tx, rng);
    return CorrelationMatrix::from_eigensystem(std::move(q), std::move(vals));
}

} // namespace randsense
