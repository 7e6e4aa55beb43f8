// SPDX-License-Identifier: Apache-2.0

#include "spintraj/linalg.hpp"
#include "spintraj/evolve.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spintraj;

TEST_CASE("hermitian_eig: identity and diagonal inputs") {
    const auto e = hermitian_eig(cmat::Identity(4, 4));
    for (int i = 0; i < 4; ++i) CHECK(e.eigenvalues[i] == Catch::Approx(1.0));
    CHECK(max_abs(e.eigenvectors * e.eigenvectors.adjoint() - cmat::Identity(4, 4)) < 1e-12);

    // sigma_z (x) I2 has eigenvalues (-1,-1,1,1) ascending
    const cmat m = kron(pauli_matrices()[2], cmat::Identity(2, 2));
    const auto ez = hermitian_eig(m);
    CHECK(ez.eigenvalues[0] == Catch::Approx(-1.0));
    CHECK(ez.eigenvalues[1] == Catch::Approx(-1.0));
    CHECK(ez.eigenvalues[2] == Catch::Approx(1.0));
    CHECK(ez.eigenvalues[3] == Catch::Approx(1.0));
}

TEST_CASE("hermitian_eig: exchange operator spectrum is traceless") {
    const auto op = exchange_operator(isotropic_config());
    double sum = 0.0;
    for (int i = 0; i < op.eig.eigenvalues.size(); ++i) sum += op.eig.eigenvalues[i];
    CHECK(std::abs(sum) < 1e-12);
    // independent oracle: the trace of the assembled matrix itself
    CHECK(std::abs(op.k_total.trace()) < 1e-12);
}

TEST_CASE("hermitian_eig: rejects bad input") {
    CHECK_THROWS_AS(hermitian_eig(cmat::Zero(3, 4)), NonSquareError);
    cmat m(2, 2);
    m << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 1.0;  // anti-Hermitian off-diagonal
    CHECK_THROWS_AS(hermitian_eig(m), NonHermitianError);
}

TEST_CASE("hermitian_eig: reconstruction residual on random Hermitian matrices") {
    auto gen = testutil::rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 15);
        const cmat m = testutil::random_hermitian(gen, n);
        const auto e = hermitian_eig(m, 1e-10);
        const cmat rec =
            e.eigenvectors * e.eigenvalues.cast<cplx>().asDiagonal() * e.eigenvectors.adjoint();
        const double scale = std::max(1.0, max_abs(m));
        CHECK(max_abs(rec - m) <= 1e-10 * scale);
        CHECK(max_abs(e.eigenvectors * e.eigenvectors.adjoint() - cmat::Identity(n, n)) < 1e-12);
        for (int i = 1; i < n; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);
    }
}

TEST_CASE("unitary_from_eig: phases") {
    const auto ez = hermitian_eig(pauli_matrices()[2]);

    CHECK(max_abs(unitary_from_eig(ez, 0.0) - cmat::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(unitary_from_eig(ez, 2.0 * std::numbers::pi) - cmat::Identity(2, 2)) < 1e-12);

    const cmat u = unitary_from_eig(ez, 0.1);
    CHECK(std::abs(u(0, 0) - std::exp(-ci * 0.1)) < 1e-14);
    CHECK(std::abs(u(1, 1) - std::exp(ci * 0.1)) < 1e-14);
    CHECK(std::abs(u(0, 1)) < 1e-14);
}

TEST_CASE("unitary_from_eig: output is unitary for random generators") {
    auto gen = testutil::rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 15);
        const auto e = hermitian_eig(testutil::random_hermitian(gen, n), 1e-10);
        std::uniform_real_distribution<double> ph(-20.0, 20.0);
        const cmat u = unitary_from_eig(e, ph(gen));
        CHECK(max_abs(u * u.adjoint() - cmat::Identity(n, n)) <= 1e-10);
    }
}

TEST_CASE("kron: identities") {
    CHECK(max_abs(kron(cmat::Identity(2, 2), cmat::Identity(2, 2)) - cmat::Identity(4, 4)) == 0.0);
    CHECK(std::abs(kron(pauli_matrices()[0], pauli_matrices()[1]).trace()) < 1e-15);
}

TEST_CASE("kron: mixed-product identity and associativity on random inputs") {
    auto gen = testutil::rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const cmat a = testutil::random_complex(gen, 2, 2), b = testutil::random_complex(gen, 2, 2);
        const cmat c = testutil::random_complex(gen, 2, 2), d = testutil::random_complex(gen, 2, 2);
        CHECK(max_abs(kron(a, b) * kron(c, d) - kron(cmat(a * c), cmat(b * d))) < 1e-12);
        CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-13);
    }
}

TEST_CASE("sqrt_psd: squares back to the input") {
    auto gen = testutil::rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const cmat g = testutil::random_complex(gen, 4, 4);
        const cmat p = g * g.adjoint();
        const cmat r = sqrt_psd(p);
        CHECK(max_abs(r * r - p) < 1e-9 * std::max(1.0, max_abs(p)));
    }
    CHECK_THROWS_AS(sqrt_psd(-cmat::Identity(2, 2)), Error);
}
