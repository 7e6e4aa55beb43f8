// SPDX-License-Identifier: Apache-2.0
//
// Dense complex matrix primitives shared by the whole library: Hermitian
// eigendecomposition, spectral-calculus matrix functions, tensor products.
// Everything here is sized for small spin Hilbert spaces (dim <= ~64), so
// plain dense algorithms are used throughout.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace spintraj {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using cplx = std::complex<double>;

inline constexpr cplx ci{0.0, 1.0};

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonSquareError : Error {
    using Error::Error;
};
struct NonHermitianError : Error {
    using Error::Error;
};

inline double max_abs(const cmat& m) { return m.cwiseAbs().maxCoeff(); }

/// max |m - m^dagger| entrywise; zero for exactly Hermitian input.
inline double hermiticity_defect(const cmat& m) {
    return max_abs(m - m.adjoint());
}

/// Eigensystem of a Hermitian matrix: real eigenvalues ascending, unitary V
/// with m = V diag(lambda) V^dagger.
struct HermitianEig {
    rvec eigenvalues;
    cmat eigenvectors;
};

inline HermitianEig hermitian_eig(const cmat& m, double herm_tol = 1e-12) {
    if (m.rows() != m.cols())
        throw NonSquareError("hermitian_eig: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    const double scale = std::max(1.0, max_abs(m));
    if (hermiticity_defect(m) > herm_tol * scale)
        throw NonHermitianError("hermitian_eig: hermiticity defect " +
                                std::to_string(hermiticity_defect(m)) + " exceeds tolerance");
    Eigen::SelfAdjointEigenSolver<cmat> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error("hermitian_eig: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// V exp(-i phase diag(lambda)) V^dagger. For Hermitian generators this is the
/// only matrix exponential the library ever needs.
inline cmat unitary_from_eig(const HermitianEig& e, double phase) {
    const Eigen::Index n = e.eigenvalues.size();
    cvec d(n);
    for (Eigen::Index i = 0; i < n; ++i)
        d[i] = std::exp(-ci * phase * e.eigenvalues[i]);
    return e.eigenvectors * d.asDiagonal() * e.eigenvectors.adjoint();
}

/// Tensor (Kronecker) product.
inline cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline cmat kron(const cmat& a, const cmat& b, const cmat& c) { return kron(kron(a, b), c); }

/// Principal square root of a positive semidefinite Hermitian matrix via
/// spectral calculus. Eigenvalues in [-neg_tol, 0) are clamped to zero.
inline cmat sqrt_psd(const cmat& m, double neg_tol = 1e-10) {
    HermitianEig e = hermitian_eig(m, 1e-9);
    const Eigen::Index n = e.eigenvalues.size();
    rvec d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double lam = e.eigenvalues[i];
        if (lam < -neg_tol)
            throw Error("sqrt_psd: eigenvalue " + std::to_string(lam) + " is negative");
        d[i] = std::sqrt(std::max(lam, 0.0));
    }
    return e.eigenvectors * d.asDiagonal() * e.eigenvectors.adjoint();
}

}  // namespace spintraj
