// SPDX-License-Identifier: Apache-2.0

#include "spintraj/states.hpp"
#include "spintraj/entangle.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spintraj;

TEST_CASE("bell states: orthonormal basis, beta- maximally entangled") {
    const auto& b = bell_states();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const cplx ov = b[i].adjoint() * b[j];
            CHECK(std::abs(ov - (i == j ? 1.0 : 0.0)) < 1e-15);
        }
    const DensityMatrix bm{b[3] * b[3].adjoint(), {2, 2}};
    CHECK(extended_concurrence(bm).c_extended == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("weighting rows") {
    const auto w1 = weighting(Weighting::W1, 0.01);
    CHECK(w1.w[0] == Catch::Approx(0.505));
    CHECK(w1.w[1] == Catch::Approx(0.495));
    CHECK(w1.w[2] == 0.0);
    CHECK(w1.w[3] == 0.0);

    const auto w14 = weighting(Weighting::W14, 0.0);
    CHECK(w14.w[0] == Catch::Approx(1.0 / 6.0));
    CHECK(w14.w[1] == Catch::Approx(1.0 / 6.0));
    CHECK(w14.w[2] == Catch::Approx(1.0 / 6.0));
    CHECK(w14.w[3] == Catch::Approx(0.5));

    const auto w6 = weighting(Weighting::W6, -0.01);
    CHECK(w6.w[0] == 0.0);
    CHECK(w6.w[1] == 0.0);
    CHECK(w6.w[2] == Catch::Approx(0.495));
    CHECK(w6.w[3] == Catch::Approx(0.505));

    for (Weighting wl : all_weightings()) {
        for (double eps : {-0.9, -0.01, 0.0, 0.01, 0.9}) {
            const auto w = weighting(wl, eps);
            double sum = 0.0;
            for (double v : w.w) {
                CHECK(v >= 0.0);
                sum += v;
            }
            CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
    CHECK_THROWS_AS(weighting(Weighting::W1, 1.5), EpsilonOutOfRangeError);
    CHECK_THROWS_AS(custom_weighting({0.5, 0.5, 0.25, 0.0}), EpsilonOutOfRangeError);
}

TEST_CASE("spin matrices: S=1/2 is Pauli/2, S=1 z-projection, S=3/2 algebra") {
    const auto half = spin_matrices(QuditSpin::Half);
    for (int k = 0; k < 3; ++k) CHECK(max_abs(half[k] - 0.5 * pauli_matrices()[k]) < 1e-15);

    const auto one = spin_matrices(QuditSpin::One);
    cmat sz_expected = cmat::Zero(3, 3);
    sz_expected(0, 0) = 1.0;
    sz_expected(2, 2) = -1.0;
    CHECK(max_abs(one[2] - sz_expected) < 1e-15);

    for (QuditSpin s : {QuditSpin::Half, QuditSpin::One, QuditSpin::ThreeHalves}) {
        const auto m = spin_matrices(s);
        const cmat comm = m[0] * m[1] - m[1] * m[0];
        CHECK(max_abs(comm - cmat(ci * m[2])) < 1e-13);
    }
    CHECK_THROWS_AS(qudit_spin_from_dim(5), UnsupportedSpinError);
}

TEST_CASE("initial_mixed: marginal concurrence, separability, trace and purity") {
    const SystemConfig cfg = isotropic_config();

    const DensityMatrix rho1 = initial_mixed(weighting(Weighting::W1, 0.01), cfg);
    rho1.validate();
    const auto marginal1 = partial_trace(rho1, std::array{0, 1});
    CHECK(extended_concurrence(marginal1).c_extended == Catch::Approx(0.01).margin(1e-12));

    const DensityMatrix rho6 = initial_mixed(weighting(Weighting::W6, 0.0), cfg);
    const auto marginal6 = partial_trace(rho6, std::array{0, 1});
    CHECK(extended_concurrence(marginal6).c_extended == Catch::Approx(0.0).margin(1e-12));
    CHECK_FALSE(ppt_entangled(marginal6));

    for (Weighting wl : all_weightings()) {
        const auto w = weighting(wl, 0.01);
        const DensityMatrix rho = initial_mixed(w, cfg);
        CHECK(std::abs(rho.rho.trace() - cplx(1.0)) < 1e-14);
        double expected_purity = 0.0;
        for (double v : w.w) expected_purity += v * v;
        CHECK(purity(rho) == Catch::Approx(expected_purity).margin(1e-12));
        if (w.nonzero_count() >= 2) CHECK(purity(rho) < 1.0);
    }
}

TEST_CASE("initial_pure: rank one, qudit assignment, marginal weights") {
    // W1 at eps=0: (|up_C>|a+> + |down_C>|a->)/sqrt(2)
    const DensityMatrix rho = initial_pure(weighting(Weighting::W1, 0.0));
    rho.validate();
    CHECK(rho.dims == std::vector<int>{2, 2, 2});
    CHECK(purity(rho) == Catch::Approx(1.0).margin(1e-12));

    const auto marginal = partial_trace(rho, std::array{0, 1});
    const auto& b = bell_states();
    const cmat expected =
        0.5 * (b[0] * b[0].adjoint()) + 0.5 * (b[1] * b[1].adjoint());
    CHECK(max_abs(marginal.rho - expected) < 1e-14);
    CHECK(extended_concurrence(marginal).c_extended == Catch::Approx(0.0).margin(1e-12));

    // three nonzero components ride a qutrit
    const DensityMatrix rho7 = initial_pure(weighting(Weighting::W7, 0.01));
    CHECK(rho7.dims == std::vector<int>{2, 2, 3});
    CHECK(purity(rho7) == Catch::Approx(1.0).margin(1e-12));

    for (Weighting wl : all_weightings()) {
        const DensityMatrix r = initial_pure(weighting(wl, 0.01));
        CHECK(purity(r) == Catch::Approx(1.0).margin(1e-12));
        r.validate();
    }
}

TEST_CASE("initial_pure: marginals are Bell-diagonal with the input weights") {
    const auto& b = bell_states();
    for (Weighting wl : all_weightings()) {
        for (double eps : {-0.01, 0.0, 0.3}) {
            const auto w = weighting(wl, eps);
            const auto marginal = partial_trace(initial_pure(w), std::array{0, 1});
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const cplx elem = b[i].adjoint() * marginal.rho * b[j];
                    const double expect = i == j ? w.w[i] : 0.0;
                    CHECK(std::abs(elem - expect) < 1e-13);
                }
        }
    }
}

TEST_CASE("partial_trace: product states, trace preservation, bad subsystems") {
    auto gen = testutil::rng(7);
    const auto rho_ab = testutil::random_two_qubit_state(gen);
    cmat rho_c = testutil::random_complex(gen, 3, 3);
    rho_c = rho_c * rho_c.adjoint();
    rho_c /= rho_c.trace();

    const DensityMatrix prod{kron(rho_ab.rho, rho_c), {2, 2, 3}};
    const auto back = partial_trace(prod, std::array{0, 1});
    CHECK(max_abs(back.rho - rho_ab.rho) < 1e-13);

    const auto c_only = partial_trace(prod, std::array{2});
    CHECK(max_abs(c_only.rho - rho_c) < 1e-13);
    CHECK(std::abs(c_only.rho.trace() - cplx(1.0)) < 1e-13);

    const auto ab_of_pure = partial_trace(initial_pure(weighting(Weighting::W11, 0.01)),
                                          std::array{0, 1});
    CHECK(std::abs(ab_of_pure.rho.trace() - cplx(1.0)) < 1e-13);

    CHECK_THROWS_AS(partial_trace(prod, std::array{3}), BadSubsystemError);
    CHECK_THROWS_AS(partial_trace(prod, std::array{0, 0}), BadSubsystemError);
}

TEST_CASE("subsystem order A,B,C is consistent across construction routes") {
    // building operators and states in different kron groupings must agree
    const auto& sigma = pauli_matrices();
    const auto spin = spin_matrices(QuditSpin::One);
    const cmat i2 = cmat::Identity(2, 2);

    const cmat route1 = kron(kron(sigma[0], i2), spin[0]);
    const cmat route2 = kron(sigma[0], kron(i2, spin[0]));
    CHECK(max_abs(route1 - route2) == 0.0);

    // a state assembled as (AB) (x) C equals the same state assembled A (x) (BC)
    auto gen = testutil::rng(17);
    const cmat a = testutil::random_complex(gen, 2, 2), b2 = testutil::random_complex(gen, 2, 2),
               c = testutil::random_complex(gen, 3, 3);
    CHECK(max_abs(kron(kron(a, b2), c) - kron(a, kron(b2, c))) < 1e-12);

    // trace_out_qudit agrees with the generic partial trace on (2,2,d)
    for (int d : {2, 3, 4}) {
        cmat g = testutil::random_complex(gen, 4 * d, 4 * d);
        cmat rho = g * g.adjoint();
        rho /= rho.trace();
        const DensityMatrix full{rho, {2, 2, d}};
        const auto generic = partial_trace(full, std::array{0, 1});
        CHECK(max_abs(generic.rho - cmat(trace_out_qudit(rho, d))) < 1e-13);
    }
}

TEST_CASE("density matrix validation catches broken invariants") {
    cmat m = cmat::Identity(4, 4);
    CHECK_THROWS_AS((DensityMatrix{m, {2, 2}}.validate()), InvalidStateError);  // trace 4
    m /= 4.0;
    CHECK_NOTHROW((DensityMatrix{m, {2, 2}}.validate()));
    m(0, 1) = 0.5;  // not Hermitian
    CHECK_THROWS_AS((DensityMatrix{m, {2, 2}}.validate()), InvalidStateError);
}
