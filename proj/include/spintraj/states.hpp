// SPDX-License-Identifier: Apache-2.0
//
// Hilbert-space layout, Bell basis, weighting tables, qudit spin operators,
// initial density matrices and partial traces.
//
// The composite space is always ordered A (x) B (x) C, where A and B are the
// spin-1/2 qubits and C is the central qudit of dimension d in {2,3,4}.

#pragma once

#include "spintraj/linalg.hpp"

#include <array>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spintraj {

struct EpsilonOutOfRangeError : Error {
    using Error::Error;
};
struct UnsupportedSpinError : Error {
    using Error::Error;
};
struct WeightCountMismatchError : Error {
    using Error::Error;
};
struct BadSubsystemError : Error {
    using Error::Error;
};
struct InvalidStateError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Pauli matrices and spin operators
// ---------------------------------------------------------------------------

inline const std::array<cmat, 3>& pauli_matrices() {
    static const std::array<cmat, 3> p = [] {
        cmat x(2, 2), y(2, 2), z(2, 2);
        x << 0, 1, 1, 0;
        y << 0, -ci, ci, 0;
        z << 1, 0, 0, -1;
        return std::array<cmat, 3>{x, y, z};
    }();
    return p;
}

enum class QuditSpin { Half, One, ThreeHalves };

inline int dim(QuditSpin s) {
    switch (s) {
        case QuditSpin::Half: return 2;
        case QuditSpin::One: return 3;
        case QuditSpin::ThreeHalves: return 4;
    }
    throw UnsupportedSpinError("invalid QuditSpin");
}

inline QuditSpin qudit_spin_from_dim(int d) {
    switch (d) {
        case 2: return QuditSpin::Half;
        case 3: return QuditSpin::One;
        case 4: return QuditSpin::ThreeHalves;
    }
    throw UnsupportedSpinError("qudit dimension " + std::to_string(d) +
                               " not supported (expected 2, 3 or 4)");
}

/// Standard angular-momentum matrices (S_x, S_y, S_z) in the spin-z basis
/// ordered by descending m: |S>, |S-1>, ..., |-S>. Satisfy [S_x,S_y] = i S_z.
inline std::array<cmat, 3> spin_matrices(QuditSpin spin) {
    const int d = dim(spin);
    const double s = 0.5 * (d - 1);
    cmat sz = cmat::Zero(d, d), sp = cmat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = s - k;
        sz(k, k) = m;
        if (k > 0) sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    const cmat sm = sp.adjoint();
    return {0.5 * (sp + sm), -0.5 * ci * (sp - sm), sz};
}

// ---------------------------------------------------------------------------
// Bell basis and weightings
// ---------------------------------------------------------------------------

/// The four Bell states of the qubit pair A,B in the order
/// (alpha+, alpha-, beta+, beta-):
///   |alpha+-> = (|uu> +- |dd>)/sqrt(2),  |beta+-> = (|ud> +- |du>)/sqrt(2).
/// Global phases are fixed with a real, positive leading coefficient.
inline const std::array<cvec, 4>& bell_states() {
    static const std::array<cvec, 4> basis = [] {
        const double r = std::sqrt(0.5);
        cvec ap(4), am(4), bp(4), bm(4);
        ap << r, 0, 0, r;
        am << r, 0, 0, -r;
        bp << 0, r, r, 0;
        bm << 0, r, -r, 0;
        return std::array<cvec, 4>{ap, am, bp, bm};
    }();
    return basis;
}

enum class Weighting {
    W1 = 1, W2, W3, W4, W5, W6, W7, W8, W9, W10, W11, W12, W13, W14
};

inline constexpr std::array<Weighting, 14> all_weightings() {
    return {Weighting::W1,  Weighting::W2,  Weighting::W3,  Weighting::W4,  Weighting::W5,
            Weighting::W6,  Weighting::W7,  Weighting::W8,  Weighting::W9,  Weighting::W10,
            Weighting::W11, Weighting::W12, Weighting::W13, Weighting::W14};
}

inline std::string to_string(Weighting w) { return "W" + std::to_string(static_cast<int>(w)); }

inline std::optional<Weighting> parse_weighting(std::string_view s) {
    if (s.size() < 2 || (s[0] != 'W' && s[0] != 'w')) return std::nullopt;
    int n = 0;
    for (char c : s.substr(1)) {
        if (c < '0' || c > '9') return std::nullopt;
        n = 10 * n + (c - '0');
    }
    if (n < 1 || n > 14) return std::nullopt;
    return static_cast<Weighting>(n);
}

/// Bell-state weights (w_a+, w_a-, w_b+, w_b-) parametrized by the
/// entanglement switch parameter epsilon.
struct BellWeighting {
    Weighting label;
    double epsilon = 0.0;
    std::array<double, 4> w{};

    int nonzero_count() const {
        int n = 0;
        for (double v : w)
            if (v != 0.0) ++n;
        return n;
    }
};

/// Canonical weighting row for a label. The dominant entry is (1+eps)/2 and
/// the remaining nonzero entries share (1-eps) equally.
inline BellWeighting weighting(Weighting label, double epsilon) {
    if (!(epsilon >= -1.0 && epsilon <= 1.0))
        throw EpsilonOutOfRangeError("weighting " + to_string(label) + ": epsilon " +
                                     std::to_string(epsilon) + " leaves [0,1] weights");
    const double p = 0.5 * (1.0 + epsilon);
    const double m2 = 0.5 * (1.0 - epsilon);
    const double m4 = 0.25 * (1.0 - epsilon);
    const double m6 = (1.0 - epsilon) / 6.0;
    std::array<double, 4> w{};
    switch (label) {
        case Weighting::W1: w = {p, m2, 0, 0}; break;
        case Weighting::W2: w = {p, 0, m2, 0}; break;
        case Weighting::W3: w = {p, 0, 0, m2}; break;
        case Weighting::W4: w = {0, p, m2, 0}; break;
        case Weighting::W5: w = {0, p, 0, m2}; break;
        case Weighting::W6: w = {0, 0, p, m2}; break;
        case Weighting::W7: w = {p, m4, m4, 0}; break;
        case Weighting::W8: w = {0, p, m4, m4}; break;
        case Weighting::W9: w = {m4, 0, p, m4}; break;
        case Weighting::W10: w = {m4, m4, 0, p}; break;
        case Weighting::W11: w = {p, m6, m6, m6}; break;
        case Weighting::W12: w = {m6, p, m6, m6}; break;
        case Weighting::W13: w = {m6, m6, p, m6}; break;
        case Weighting::W14: w = {m6, m6, m6, p}; break;
    }
    return {label, epsilon, w};
}

/// Generic weighting outside the canonical table; must be a normalized
/// probability vector. Carries no golden values.
inline BellWeighting custom_weighting(const std::array<double, 4>& w) {
    double sum = 0.0;
    for (double v : w) {
        if (v < 0.0 || !std::isfinite(v))
            throw EpsilonOutOfRangeError("custom_weighting: weights must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw EpsilonOutOfRangeError("custom_weighting: weights must sum to 1");
    return {Weighting::W1, 0.0, w};
}

// ---------------------------------------------------------------------------
// System configuration
// ---------------------------------------------------------------------------

/// Exchange geometry shared by every run.
///
/// eta_a holds the per-axis coupling weights of qubit A; (1,1,1) is the
/// isotropic exchange where each spin axis couples with full amplitude j0.
/// Qubit B couples with eta_a/gamma, so gamma < 0 realizes antiphase drives.
struct SystemConfig {
    QuditSpin qudit_spin = QuditSpin::Half;
    Eigen::Vector3d eta_a = Eigen::Vector3d::Ones();
    double gamma = 1.0;
    double j0 = -1.0;

    Eigen::Vector3d eta_b() const { return eta_a / gamma; }

    void validate() const {
        if (!eta_a.allFinite() || eta_a.norm() == 0.0)
            throw InvalidStateError("SystemConfig: eta_a must be finite and nonzero");
        if (gamma == 0.0 || !std::isfinite(gamma))
            throw InvalidStateError("SystemConfig: gamma must be finite and nonzero");
        if (j0 == 0.0 || !std::isfinite(j0))
            throw InvalidStateError("SystemConfig: j0 must be finite and nonzero");
    }
};

inline SystemConfig isotropic_config(double j0 = -1.0, QuditSpin spin = QuditSpin::Half,
                                     double gamma = 1.0) {
    SystemConfig cfg;
    cfg.qudit_spin = spin;
    cfg.j0 = j0;
    cfg.gamma = gamma;
    return cfg;
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Density matrix with its subsystem layout, (2,2,d) for A(x)B(x)C or (2,2)
/// for the reduced qubit pair.
struct DensityMatrix {
    cmat rho;
    std::vector<int> dims;

    int dim() const { return static_cast<int>(rho.rows()); }

    /// Hermiticity, unit trace and positive semidefiniteness checks.
    void validate(double tol = 1e-10) const {
        int prod = 1;
        for (int d : dims) prod *= d;
        if (rho.rows() != rho.cols() || prod != rho.rows())
            throw InvalidStateError("DensityMatrix: dims inconsistent with storage");
        if (hermiticity_defect(rho) > tol)
            throw InvalidStateError("DensityMatrix: not Hermitian");
        if (std::abs(rho.trace() - cplx(1.0)) > tol)
            throw InvalidStateError("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<cmat> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol)
            throw InvalidStateError("DensityMatrix: negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    }
};

/// rho0 = sum_i w_i |bell_i><bell_i| on A,B, tensored with the qudit C in its
/// highest-weight spin-z state |m = S>.
inline DensityMatrix initial_mixed(const BellWeighting& w, const SystemConfig& cfg) {
    const auto& bells = bell_states();
    cmat rho_ab = cmat::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        if (w.w[i] != 0.0) rho_ab += w.w[i] * (bells[i] * bells[i].adjoint());
    const int d = dim(cfg.qudit_spin);
    cmat rho_c = cmat::Zero(d, d);
    rho_c(0, 0) = 1.0;
    return {kron(rho_ab, rho_c), {2, 2, d}};
}

/// Qudit dimension assigned to pure initial states: the label group fixes
/// d = 2 for W1-6, d = 3 for W7-10 and d = 4 for W11-14.
inline QuditSpin pure_qudit_spin(Weighting label) {
    const int n = static_cast<int>(label);
    if (n <= 6) return QuditSpin::Half;
    if (n <= 10) return QuditSpin::One;
    return QuditSpin::ThreeHalves;
}

/// Rank-1 state |psi0> = sum_{w_i != 0} sqrt(w_i) |i_C> (x) |bell_i>, pairing
/// the nonzero-weight Bell states, in the order (a+, a-, b+, b-), with the
/// spin-z eigenstates of C in descending m.
inline DensityMatrix initial_pure(const BellWeighting& w) {
    const int d = dim(pure_qudit_spin(w.label));
    if (w.nonzero_count() > d)
        throw WeightCountMismatchError(to_string(w.label) + ": " +
                                       std::to_string(w.nonzero_count()) +
                                       " nonzero weights exceed qudit dimension " +
                                       std::to_string(d));
    const auto& bells = bell_states();
    cvec psi = cvec::Zero(4 * d);
    int slot = 0;
    for (int i = 0; i < 4; ++i) {
        if (w.w[i] == 0.0) continue;
        cvec e_c = cvec::Zero(d);
        e_c[slot++] = 1.0;
        // layout A (x) B (x) C: the qudit index is the fastest one
        for (int ab = 0; ab < 4; ++ab)
            for (int c = 0; c < d; ++c) psi[ab * d + c] += std::sqrt(w.w[i]) * bells[i][ab] * e_c[c];
    }
    return {psi * psi.adjoint(), {2, 2, d}};
}

/// Partial trace keeping the listed subsystems (0-based indices into dims,
/// canonical order). Trace is preserved.
inline DensityMatrix partial_trace(const DensityMatrix& in, std::span<const int> keep) {
    const int n = static_cast<int>(in.dims.size());
    std::vector<bool> keep_mask(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw BadSubsystemError("partial_trace: subsystem index out of range");
        if (keep_mask[k]) throw BadSubsystemError("partial_trace: duplicate subsystem index");
        keep_mask[k] = true;
    }
    std::vector<int> kept, traced;
    for (int i = 0; i < n; ++i) (keep_mask[i] ? kept : traced).push_back(i);

    // row-major strides of the full index
    std::vector<long> stride(n, 1);
    for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * in.dims[i + 1];

    long dk = 1, dt = 1;
    std::vector<int> kept_dims;
    for (int i : kept) {
        dk *= in.dims[i];
        kept_dims.push_back(in.dims[i]);
    }
    for (int i : traced) dt *= in.dims[i];

    auto offset = [&](const std::vector<int>& subs, long lin) {
        long off = 0;
        for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
            off += (lin % in.dims[subs[i]]) * stride[subs[i]];
            lin /= in.dims[subs[i]];
        }
        return off;
    };

    cmat out = cmat::Zero(dk, dk);
    for (long m = 0; m < dt; ++m) {
        const long base = offset(traced, m);
        for (long r = 0; r < dk; ++r) {
            const long ro = offset(kept, r) + base;
            for (long c = 0; c < dk; ++c) out(r, c) += in.rho(ro, offset(kept, c) + base);
        }
    }
    return {out, kept_dims};
}

/// Fast specialization: trace out the qudit C from a (2,2,d) state.
inline Eigen::Matrix4cd trace_out_qudit(const cmat& rho_abc, int d) {
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int m = 0; m < d; ++m) out(r, c) += rho_abc(r * d + m, c * d + m);
    return out;
}

}  // namespace spintraj
