// SPDX-License-Identifier: Apache-2.0

#include "spintraj/evolve.hpp"
#include "spintraj/entangle.hpp"
#include "spintraj/trajectory.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spintraj;

namespace {

std::vector<double> uniform_grid(double t_end, int n) {
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = t_end * i / n;
    return g;
}

double marginal_ce(const DensityMatrix& rho, int d) {
    return extended_concurrence_4x4(trace_out_qudit(rho.rho, d)).c_extended;
}

}  // namespace

TEST_CASE("exchange operator: hermitian, traceless, gamma handling") {
    SystemConfig cfg = isotropic_config();
    cfg.eta_a = Eigen::Vector3d::Ones() / std::sqrt(3.0);
    const auto op = exchange_operator(cfg);
    CHECK(op.k_total.rows() == 8);
    CHECK(hermiticity_defect(op.k_total) < 1e-15);
    CHECK(std::abs(op.k_total.trace()) < 1e-15);
    CHECK(max_abs(op.k_total - (op.k_a + op.k_b)) < 1e-15);

    // gamma = -1 flips only the B part
    SystemConfig anti = cfg;
    anti.gamma = -1.0;
    const auto op_anti = exchange_operator(anti);
    CHECK(max_abs(op_anti.k_a - op.k_a) == 0.0);
    CHECK(max_abs(op_anti.k_b + op.k_b) == 0.0);
}

TEST_CASE("exchange operator: z-anisotropy commutes with total spin z") {
    SystemConfig cfg = isotropic_config();
    cfg.eta_a = Eigen::Vector3d(0.0, 0.0, 1.0);
    cfg.qudit_spin = QuditSpin::One;
    const auto op = exchange_operator(cfg);

    const auto& sz = pauli_matrices()[2];
    const auto spin = spin_matrices(QuditSpin::One);
    const cmat i2 = cmat::Identity(2, 2), i3 = cmat::Identity(3, 3);
    const cmat sz_total = kron(cmat(0.5 * sz), i2, i3) + kron(i2, cmat(0.5 * sz), i3) +
                          kron(i2, i2, spin[2]);
    CHECK(max_abs(op.k_total * sz_total - sz_total * op.k_total) < 1e-14);
}

TEST_CASE("evolve_inphase: identity at I=0, full-period return, boundary at I*") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W1, 0.01), cfg);

    CHECK(max_abs(evolve_inphase(rho0, op, 0.0).rho - rho0.rho) < 1e-15);

    // a sinusoidal drive returns to I = 0 after a full period
    const auto d = sinusoidal_drive(-1.0, 2.0, 0.0);
    const double period = 2.0 * std::numbers::pi / d.omega;
    CHECK(std::abs(eti(d, period)) < 1e-14);
    CHECK(max_abs(evolve_inphase(rho0, op, eti(d, period)).rho - rho0.rho) < 1e-12);

    const auto cp = find_tstar(rho0, op, cfg.j0);
    REQUIRE(cp.has_value());
    const auto at_boundary = evolve_inphase(rho0, op, cp->i_star);
    CHECK(std::abs(marginal_ce(at_boundary, 2)) < 1e-7);
}

TEST_CASE("evolve_inphase preserves trace, spectrum and purity of the full state") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W7, 0.01), cfg);
    Eigen::SelfAdjointEigenSolver<cmat> es0(rho0.rho, Eigen::EigenvaluesOnly);
    for (double i_val : {0.2, 1.0, 3.7}) {
        const auto rho = evolve_inphase(rho0, op, i_val);
        CHECK(std::abs(rho.rho.trace() - cplx(1.0)) < 1e-13);
        CHECK(purity(rho) == Catch::Approx(purity(rho0)).margin(1e-10));
        Eigen::SelfAdjointEigenSolver<cmat> es(rho.rho, Eigen::EigenvaluesOnly);
        CHECK(max_abs(cmat(es.eigenvalues() - es0.eigenvalues())) < 1e-8);
    }
}

TEST_CASE("fast path structural check") {
    const double omega = 7.3;
    const auto a = sinusoidal_drive(-1.0, omega, 0.0);
    CHECK(fast_path_available({a, sinusoidal_drive(-1.0, omega, 0.0)}, 1.0));
    CHECK(fast_path_available({a, sinusoidal_drive(1.0, omega, std::numbers::pi)}, 1.0));
    CHECK(fast_path_available({a, sinusoidal_drive(-0.5, omega, 0.0)}, 2.0));
    CHECK(fast_path_available({a, sinusoidal_drive(-1.0, omega, std::numbers::pi)}, -1.0));
    CHECK_FALSE(fast_path_available({a, sinusoidal_drive(-1.0, omega, 0.5)}, 1.0));
    CHECK_FALSE(fast_path_available({a, sinusoidal_drive(-1.0, 1.1 * omega, 0.0)}, 1.0));
    CHECK_FALSE(fast_path_available({a, constant_drive(-1.0)}, 1.0));
    CHECK_FALSE(fast_path_available({a, sinusoidal_drive(-0.5, omega, 0.0)}, 1.0));
}

TEST_CASE("stepper: single-generator limit matches spectral evolution") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W3, 0.01), cfg);

    // drive B off: H(t) = J0 K_A, so rho(t) = exp(-i J0 t K_A) rho0 exp(+i ...)
    const DrivePair drives{constant_drive(-1.0), constant_drive(0.0)};
    const auto grid = uniform_grid(1.3, 13);
    StepperOptions opts;
    opts.refine_tol = 1e-10;
    const auto states = evolve_stepper(rho0, op, drives, grid, opts);

    const auto eig_a = hermitian_eig(op.k_a);
    for (size_t i = 0; i < grid.size(); ++i) {
        const cmat u = unitary_from_eig(eig_a, -1.0 * grid[i]);
        CHECK(max_abs(states[i].rho - cmat(u * rho0.rho * u.adjoint())) < 1e-9);
    }
}

TEST_CASE("stepper matches the fast path for in-phase and antiphase drives") {
    for (double gamma : {1.0, -1.0}) {
        SystemConfig cfg = isotropic_config(-1.0, QuditSpin::Half, gamma);
        const auto op = exchange_operator(cfg);
        const auto rho0 = initial_mixed(weighting(Weighting::W1, 0.01), cfg);
        const auto cp = find_tstar(rho0, op, cfg.j0);
        REQUIRE(cp.has_value());

        const double T = cp->t_star;
        const double omega = 2.0 * std::numbers::pi / T;
        const double phi_b = gamma < 0.0 ? std::numbers::pi : 0.0;
        const DrivePair drives{sinusoidal_drive(-1.0, omega, 0.0),
                               sinusoidal_drive(-1.0 / std::abs(gamma), omega, phi_b)};
        REQUIRE(fast_path_available(drives, gamma));

        const auto grid = uniform_grid(2.0 * T, 64);
        const auto stepped = evolve_stepper(rho0, op, drives, grid);
        double worst = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            const auto fast = evolve_inphase(rho0, op, eti(drives.a, grid[i]));
            worst = std::max(worst, std::abs(marginal_ce(stepped[i], 2) - marginal_ce(fast, 2)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("ode oracle: flat Hamiltonian, trace conservation, fast-path agreement") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W1, 0.01), cfg);

    // H = 0 keeps the state frozen
    const DrivePair off{constant_drive(0.0), constant_drive(0.0)};
    const auto frozen = ode_oracle(rho0, op, off, uniform_grid(1.0, 4), 1e-3);
    CHECK(max_abs(frozen.back().rho - rho0.rho) < 1e-14);

    const auto cp = find_tstar(rho0, op, cfg.j0);
    REQUIRE(cp.has_value());
    const double T = cp->t_star;
    const double omega = 2.0 * std::numbers::pi / T;
    const DrivePair drives{sinusoidal_drive(-1.0, omega, 0.0), sinusoidal_drive(-1.0, omega, 0.0)};

    const auto grid = uniform_grid(T, 10);
    const auto states = ode_oracle(rho0, op, drives, grid, 1e-4);
    double worst_tdist = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const auto fast = evolve_inphase(rho0, op, eti(drives.a, grid[i]));
        Eigen::SelfAdjointEigenSolver<cmat> es(cmat(states[i].rho - fast.rho),
                                               Eigen::EigenvaluesOnly);
        worst_tdist = std::max(worst_tdist, 0.5 * es.eigenvalues().cwiseAbs().sum());
        CHECK(std::abs(states[i].rho.trace() - cplx(1.0)) < 1e-9 * std::max(1.0, grid[i]));
    }
    CHECK(worst_tdist < 1e-6);
}

TEST_CASE("stepper: unitarity of the evolved spectrum over long out-of-phase runs") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W2, 0.01), cfg);

    const double omega = 10.0;
    const DrivePair drives{sinusoidal_drive(-1.0, omega, std::numbers::pi / 6.0),
                           sinusoidal_drive(-1.0, omega, 0.0)};
    CHECK_FALSE(fast_path_available(drives, 1.0));

    const auto grid = uniform_grid(12.0, 24);
    StepperOptions opts;
    opts.refine_tol = 1e-7;
    const auto states = evolve_stepper(rho0, op, drives, grid, opts);

    Eigen::SelfAdjointEigenSolver<cmat> es0(rho0.rho, Eigen::EigenvaluesOnly);
    const double purity0 = purity(rho0);
    for (const auto& rho : states) {
        Eigen::SelfAdjointEigenSolver<cmat> es(rho.rho, Eigen::EigenvaluesOnly);
        CHECK(max_abs(cmat(es.eigenvalues() - es0.eigenvalues())) < 1e-8);
        CHECK(std::abs(purity(rho) - purity0) < 1e-8);
    }
}

TEST_CASE("stepper refinement cap raises") {
    const SystemConfig cfg = isotropic_config();
    const auto op = exchange_operator(cfg);
    const auto rho0 = initial_mixed(weighting(Weighting::W1, 0.01), cfg);
    const DrivePair drives{sinusoidal_drive(-1.0, 10.0, 0.4), sinusoidal_drive(-1.0, 10.0, 0.0)};
    StepperOptions opts;
    opts.dt0 = 0.5;          // hopeless starting resolution
    opts.refine_tol = 1e-16;  // unreachable
    opts.max_halvings = 2;
    const auto grid = uniform_grid(3.0, 6);
    CHECK_THROWS_AS(evolve_stepper(rho0, op, drives, grid, opts), NonConvergentSteppingError);
}
