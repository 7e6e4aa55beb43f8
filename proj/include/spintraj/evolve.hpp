// SPDX-License-Identifier: Apache-2.0
//
// Time evolution of the composite state rho_ABC.
//
// Two paths are provided. When the two drives stay proportional in time
// (in-phase or antiphase), the propagator factors through a single
// exchange-time integral and evolution is one spectral conjugation
//   rho(t) = V exp(-i I(t) D) V^dag rho0 V exp(+i I(t) D) V^dag.
// Otherwise a time-ordered stepper advances with one piecewise-constant
// exponential per step, built from the exact per-step ETI increments of both
// drives, so the in-phase limit is recovered exactly and the only error
// left is the time-ordering (commutator) one.

#pragma once

#include "spintraj/drive.hpp"
#include "spintraj/states.hpp"

#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace spintraj {

struct FastPathUnavailableError : Error {
    using Error::Error;
};
struct NonConvergentSteppingError : Error {
    using Error::Error;
};

/// The spin-exchange generator K = K_A + K_B on A (x) B (x) C, with
/// K_A = sum_k eta_k sigma_k^A S_k^C and K_B = sum_k (eta_k/gamma)
/// sigma_k^B S_k^C. Hermitian and traceless.
struct ExchangeOperator {
    cmat k_total;
    cmat k_a;
    cmat k_b;
    HermitianEig eig;  // of k_total
    int qudit_dim = 2;
    double gamma = 1.0;
};

inline ExchangeOperator exchange_operator(const SystemConfig& cfg) {
    cfg.validate();
    const int d = dim(cfg.qudit_spin);
    const auto spin = spin_matrices(cfg.qudit_spin);
    const auto& sigma = pauli_matrices();
    const cmat i2 = cmat::Identity(2, 2);
    cmat k_a = cmat::Zero(4 * d, 4 * d), k_b = cmat::Zero(4 * d, 4 * d);
    for (int k = 0; k < 3; ++k) {
        k_a += cfg.eta_a[k] * kron(sigma[k], i2, spin[k]);
        k_b += (cfg.eta_a[k] / cfg.gamma) * kron(i2, sigma[k], spin[k]);
    }
    ExchangeOperator op;
    op.k_total = k_a + k_b;
    op.k_a = std::move(k_a);
    op.k_b = std::move(k_b);
    op.eig = hermitian_eig(op.k_total);
    op.qudit_dim = d;
    op.gamma = cfg.gamma;
    return op;
}

/// Unitary conjugation by exp(-i I K): trace, spectrum and purity of the
/// composite state are preserved.
inline DensityMatrix evolve_inphase(const DensityMatrix& rho0, const ExchangeOperator& op,
                                    double eti_value) {
    const cmat u = unitary_from_eig(op.eig, eti_value);
    return {u * rho0.rho * u.adjoint(), rho0.dims};
}

struct DrivePair {
    ExchangeDrive a, b;
};

/// Structural test for the single-ETI fast path: both drives must share the
/// waveform family and frequency, with phases equal or opposite and the
/// amplitude ratio matching the exchange ratio gamma (antiphase flips its
/// sign).
inline bool fast_path_available(const DrivePair& drives, double gamma, double tol = 1e-12) {
    const ExchangeDrive &a = drives.a, &b = drives.b;
    if (a.kind != b.kind) return false;
    if (b.j0 == 0.0) return false;
    double ratio = a.j0 / b.j0;
    switch (a.kind) {
        case DriveKind::Constant: break;
        case DriveKind::Sinusoidal:
        case DriveKind::DampedSinusoidal: {
            if (std::abs(a.omega - b.omega) > tol || std::abs(a.eta - b.eta) > tol) return false;
            const double dphi = std::remainder(a.phi - b.phi, 2.0 * std::numbers::pi);
            if (std::abs(dphi) <= tol) {
                // in phase
            } else if (std::abs(std::abs(dphi) - std::numbers::pi) <= tol) {
                ratio = -ratio;
            } else {
                return false;
            }
            break;
        }
        case DriveKind::StepStop:
        case DriveKind::Cos2Pulse:
            if (std::abs(a.t_star - b.t_star) > tol) return false;
            break;
        case DriveKind::Tabulated: return false;
    }
    return std::abs(ratio - gamma) <= tol * std::max(1.0, std::abs(gamma));
}

struct StepperOptions {
    double dt0 = 0.0;          // initial step; 0 = auto (period/2000, else 1e-3)
    double refine_tol = 1e-8;  // sampled change allowed between refinements
    int max_halvings = 12;
};

namespace detail {

inline double auto_dt(const DrivePair& drives) {
    double omega = std::max(drives.a.omega, drives.b.omega);
    if (omega > 0.0) return 2.0 * std::numbers::pi / omega / 2000.0;
    return 1e-3;
}

// acc <- exp(-i g) acc for Hermitian g. Small generators (the stepper's
// common case) expand the product directly with an adaptive Taylor degree;
// anything larger goes through scaling and squaring. Truncation stays below
// 1e-19 on every branch.
template <typename Mat>
void apply_unitary_exp_neg_i(const Mat& g, Mat& acc, Mat& term, Mat& scratch) {
    const double norm = g.cwiseAbs().rowwise().sum().maxCoeff();
    constexpr cplx neg_i{0.0, -1.0};
    if (norm <= 0.03125) {
        const int degree = norm <= 0.002 ? 5 : 9;
        term = acc;
        for (int k = 1; k <= degree; ++k) {
            scratch.noalias() = g * term;
            term = (neg_i / static_cast<double>(k)) * scratch;
            acc += term;
        }
        return;
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.03125 && squarings < 60) {
        ++squarings;
        scale *= 0.5;
    }
    Mat sum = Mat::Identity(g.rows(), g.cols());
    term = sum;
    for (int k = 1; k <= 9; ++k) {
        scratch.noalias() = g * term;
        term = (neg_i * scale / static_cast<double>(k)) * scratch;
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        scratch.noalias() = sum * sum;
        sum = scratch;
    }
    scratch.noalias() = sum * acc;
    acc = scratch;
}

// One full pass over the grid with nsub equal substeps per grid interval.
// Each substep multiplies exp(-i (dIa K_A + dIb gamma K_B)) into the
// interval propagator; the state is conjugated once per grid interval.
template <typename Mat>
void stepper_pass_impl(const Mat& rho0, const Mat& gen_a, const Mat& gen_b,
                       const DrivePair& drives, std::span<const double> t_grid, long nsub,
                       const std::function<void(size_t, const cmat&)>& on_sample) {
    Mat rho = rho0;
    Mat g = rho0, term = rho0, scratch = rho0, acc = rho0;  // shape-only init
    double ia_prev = eti(drives.a, t_grid[0]), ib_prev = eti(drives.b, t_grid[0]);
    on_sample(0, cmat(rho));
    for (size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double t0 = t_grid[gi - 1], t1 = t_grid[gi];
        acc.setIdentity(rho0.rows(), rho0.cols());
        for (long s = 1; s <= nsub; ++s) {
            const double t = t0 + (t1 - t0) * static_cast<double>(s) / static_cast<double>(nsub);
            const double ia = eti(drives.a, t), ib = eti(drives.b, t);
            g = (ia - ia_prev) * gen_a + (ib - ib_prev) * gen_b;
            apply_unitary_exp_neg_i(g, acc, term, scratch);
            ia_prev = ia;
            ib_prev = ib;
        }
        scratch.noalias() = acc * rho;
        rho.noalias() = scratch * acc.adjoint();
        on_sample(gi, cmat(rho));
    }
}

inline void stepper_pass(const DensityMatrix& rho0, const ExchangeOperator& op,
                         const DrivePair& drives, std::span<const double> t_grid, long nsub,
                         const std::function<void(size_t, const cmat&)>& on_sample) {
    if (t_grid.empty()) return;
    const cmat gen_b = op.gamma * op.k_b;  // drive-B multiplier without the 1/gamma weighting
    switch (rho0.rho.rows()) {
        case 8: {
            using M8 = Eigen::Matrix<cplx, 8, 8>;
            stepper_pass_impl<M8>(M8(rho0.rho), M8(op.k_a), M8(gen_b), drives, t_grid, nsub,
                                  on_sample);
            return;
        }
        case 12: {
            using M12 = Eigen::Matrix<cplx, 12, 12>;
            stepper_pass_impl<M12>(M12(rho0.rho), M12(op.k_a), M12(gen_b), drives, t_grid, nsub,
                                   on_sample);
            return;
        }
        case 16: {
            using M16 = Eigen::Matrix<cplx, 16, 16>;
            stepper_pass_impl<M16>(M16(rho0.rho), M16(op.k_a), M16(gen_b), drives, t_grid, nsub,
                                   on_sample);
            return;
        }
        default:
            stepper_pass_impl<cmat>(rho0.rho, op.k_a, gen_b, drives, t_grid, nsub, on_sample);
    }
}

inline long initial_nsub(const DrivePair& drives, std::span<const double> t_grid, double dt0) {
    double max_interval = 0.0;
    for (size_t g = 1; g < t_grid.size(); ++g)
        max_interval = std::max(max_interval, t_grid[g] - t_grid[g - 1]);
    const double dt = dt0 > 0.0 ? dt0 : auto_dt(drives);
    return std::max<long>(1, static_cast<long>(std::ceil(max_interval / dt)));
}

}  // namespace detail

/// Time-ordered propagation sampled on t_grid. The substep count is doubled
/// until the sampled states move by less than refine_tol between successive
/// refinements; NonConvergentStepping after max_halvings doublings.
inline std::vector<DensityMatrix> evolve_stepper(const DensityMatrix& rho0,
                                                 const ExchangeOperator& op,
                                                 const DrivePair& drives,
                                                 std::span<const double> t_grid,
                                                 const StepperOptions& opts = {}) {
    if (t_grid.empty()) return {};
    long nsub = detail::initial_nsub(drives, t_grid, opts.dt0);

    std::vector<cmat> current(t_grid.size());
    detail::stepper_pass(rho0, op, drives, t_grid, nsub,
                         [&](size_t g, const cmat& r) { current[g] = r; });
    for (int h = 0; h <= opts.max_halvings; ++h) {
        std::vector<cmat> finer(t_grid.size());
        detail::stepper_pass(rho0, op, drives, t_grid, 2 * nsub,
                             [&](size_t g, const cmat& r) { finer[g] = r; });
        double change = 0.0;
        for (size_t g = 0; g < t_grid.size(); ++g)
            change = std::max(change, max_abs(finer[g] - current[g]));
        current = std::move(finer);
        nsub *= 2;
        if (change < opts.refine_tol) {
            std::vector<DensityMatrix> out;
            out.reserve(t_grid.size());
            for (auto& r : current) out.push_back({std::move(r), rho0.dims});
            return out;
        }
    }
    throw NonConvergentSteppingError("evolve_stepper: refinement cap reached at " +
                                     std::to_string(nsub) + " substeps per interval");
}

/// Memory-light flavor for long runs: only a scalar observable of the state
/// is kept per sample, and refinement convergence is judged on the sampled
/// observable itself.
inline std::vector<double> evolve_stepper_sample(
    const DensityMatrix& rho0, const ExchangeOperator& op, const DrivePair& drives,
    std::span<const double> t_grid, const std::function<double(const cmat&)>& observable,
    const StepperOptions& opts = {}) {
    if (t_grid.empty()) return {};
    long nsub = detail::initial_nsub(drives, t_grid, opts.dt0);

    std::vector<double> current(t_grid.size());
    detail::stepper_pass(rho0, op, drives, t_grid, nsub,
                         [&](size_t g, const cmat& r) { current[g] = observable(r); });
    for (int h = 0; h <= opts.max_halvings; ++h) {
        std::vector<double> finer(t_grid.size());
        detail::stepper_pass(rho0, op, drives, t_grid, 2 * nsub,
                             [&](size_t g, const cmat& r) { finer[g] = observable(r); });
        double change = 0.0;
        for (size_t g = 0; g < t_grid.size(); ++g)
            change = std::max(change, std::abs(finer[g] - current[g]));
        current = std::move(finer);
        nsub *= 2;
        if (change < opts.refine_tol) return current;
    }
    throw NonConvergentSteppingError("evolve_stepper_sample: refinement cap reached at " +
                                     std::to_string(nsub) + " substeps per interval");
}

/// Independent brute-force reference: classical RK4 on the von Neumann
/// equation d rho / dt = -i [H(t), rho] with H(t) = J_a(t) K_A +
/// J_b(t) gamma K_B, fixed fine step. Used in tests against both evolution
/// paths.
inline std::vector<DensityMatrix> ode_oracle(const DensityMatrix& rho0,
                                             const ExchangeOperator& op, const DrivePair& drives,
                                             std::span<const double> t_grid, double dt = 1e-4) {
    const cmat gen_a = op.k_a;
    const cmat gen_b = op.gamma * op.k_b;
    auto commutator_rhs = [&](double t, const cmat& r) -> cmat {
        const cmat h = eval(drives.a, t) * gen_a + eval(drives.b, t) * gen_b;
        return -ci * (h * r - r * h);
    };
    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());
    cmat rho = rho0.rho;
    double t = t_grid.empty() ? 0.0 : t_grid[0];
    for (size_t g = 0; g < t_grid.size(); ++g) {
        const double target = t_grid[g];
        const long n = std::max<long>(1, static_cast<long>(std::ceil((target - t) / dt - 1e-12)));
        const double h = (target - t) / static_cast<double>(n);
        if (target > t) {
            for (long s = 0; s < n; ++s) {
                const cmat k1 = commutator_rhs(t, rho);
                const cmat k2 = commutator_rhs(t + 0.5 * h, rho + 0.5 * h * k1);
                const cmat k3 = commutator_rhs(t + 0.5 * h, rho + 0.5 * h * k2);
                const cmat k4 = commutator_rhs(t + h, rho + h * k3);
                rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t += h;
            }
            t = target;
        }
        out.push_back({rho, rho0.dims});
    }
    return out;
}

}  // namespace spintraj
