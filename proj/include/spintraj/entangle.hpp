// SPDX-License-Identifier: Apache-2.0
//
// Entanglement metrics on the reduced two-qubit state. The extended
// concurrence keeps the sign of 2 kappa_max - sum(kappa): positive means
// entangled, negative measures the distance into the separable region.

#pragma once

#include "spintraj/states.hpp"

#include <algorithm>
#include <array>

namespace spintraj {

struct BadDimensionError : Error {
    using Error::Error;
};

struct ConcurrenceResult {
    double c_extended = 0.0;
    std::array<double, 4> kappas{};  // descending
};

namespace detail {

inline const Eigen::Matrix4cd& sigma_yy() {
    static const Eigen::Matrix4cd m = [] {
        const cmat yy = kron(pauli_matrices()[1], pauli_matrices()[1]);
        return Eigen::Matrix4cd(yy);
    }();
    return m;
}

}  // namespace detail

/// kappa_i and C_E = 2 kappa_max - sum(kappa) for a 4x4 two-qubit density
/// matrix. The kappa are the square roots of the eigenvalues of rho rho',
/// rho' = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y); tiny imaginary
/// parts are discarded and negatives clamped to zero.
inline ConcurrenceResult extended_concurrence_4x4(const Eigen::Matrix4cd& rho) {
    const Eigen::Matrix4cd& yy = detail::sigma_yy();
    const Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * rho_tilde, false);
    ConcurrenceResult out;
    for (int i = 0; i < 4; ++i) out.kappas[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i].real()));
    std::sort(out.kappas.begin(), out.kappas.end(), std::greater<>());
    out.c_extended =
        2.0 * out.kappas[0] - (out.kappas[0] + out.kappas[1] + out.kappas[2] + out.kappas[3]);
    return out;
}

inline ConcurrenceResult extended_concurrence(const DensityMatrix& rho_ab) {
    if (rho_ab.rho.rows() != 4 || rho_ab.rho.cols() != 4 ||
        rho_ab.dims != std::vector<int>{2, 2})
        throw BadDimensionError("extended_concurrence: expected a (2,2) two-qubit state");
    return extended_concurrence_4x4(rho_ab.rho);
}

/// Partial transpose over qubit B of a two-qubit state.
inline Eigen::Matrix4cd partial_transpose_b(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    out(2 * a + b, 2 * ap + bp) = rho(2 * a + bp, 2 * ap + b);
    return out;
}

/// Peres-Horodecki test: true iff the partial transpose over B has an
/// eigenvalue below -tol. Exact for 2x2 systems.
inline bool ppt_entangled(const DensityMatrix& rho_ab, double tol = 1e-10) {
    if (rho_ab.rho.rows() != 4 || rho_ab.rho.cols() != 4 ||
        rho_ab.dims != std::vector<int>{2, 2})
        throw BadDimensionError("ppt_entangled: expected a (2,2) two-qubit state");
    const Eigen::Matrix4cd pt = partial_transpose_b(Eigen::Matrix4cd(rho_ab.rho));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() < -tol;
}

/// Tr rho^2.
inline double purity(const DensityMatrix& rho) { return (rho.rho * rho.rho).trace().real(); }

/// |C_E| at or below this value counts as "on the boundary" for
/// classification purposes.
inline constexpr double boundary_tolerance = 1e-8;

}  // namespace spintraj
