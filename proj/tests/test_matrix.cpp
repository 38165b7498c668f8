#include <doctest.h>

#include "qnn/errors.hpp"
#include "qnn/matrix.hpp"
#include "test_util.hpp"

using namespace qnn;
using test::random_hermitian;
using test::random_matrix;

TEST_CASE("kron identity and pauli blocks") {
    CHECK(max_abs(kron(identity(2), identity(2)) - identity(4)) == 0.0);

    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = 1;
    expect(1, 1) = 1;
    expect(2, 2) = -1;
    expect(3, 3) = -1;
    CHECK(max_abs(kron(pauli_z(), identity(2)) - expect) == 0.0);
}

TEST_CASE("kron matches the index-formula oracle") {
    ComplexMatrix a = random_matrix(2), b = random_matrix(2);
    ComplexMatrix k = kron(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q)
                    CHECK(std::abs(k(i * 2 + p, j * 2 + q) - a(i, j) * b(p, q)) < 1e-12);
}

TEST_CASE("kron associativity") {
    ComplexMatrix a = random_matrix(2), b = random_matrix(3), c = random_matrix(2);
    CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
}

TEST_CASE("embed places the operator at the requested site") {
    CHECK(max_abs(embed(pauli_z(), 0, 1) - pauli_z()) == 0.0);

    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect.diagonal() << 1, -1, 1, -1;
    CHECK(max_abs(embed(pauli_z(), 1, 2) - expect) == 0.0);

    CHECK(max_abs(embed(sigma_plus(), 2, 3) -
                  kron(identity(2), kron(identity(2), sigma_plus()))) == 0.0);

    CHECK_THROWS_AS(embed(pauli_z(), 3, 3), ValidationError);
    CHECK_THROWS_AS(embed(pauli_z(), -1, 2), ValidationError);
}

TEST_CASE("herm_eig pauli spectra") {
    auto z = herm_eig(pauli_z());
    CHECK(z.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(z.eigenvalues[1] == doctest::Approx(1.0));

    auto x = herm_eig(pauli_x());
    CHECK(x.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(x.eigenvalues[1] == doctest::Approx(1.0));
    // eigenvectors (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase
    Eigen::Vector2cd minus = x.eigenvectors.col(0);
    CHECK(std::abs(std::abs(minus[0]) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(minus[0] + minus[1]) < 1e-12);
}

TEST_CASE("herm_eig reconstruction on a random 8x8 Hermitian") {
    ComplexMatrix a = random_hermitian(8);
    auto ed = herm_eig(a);
    ComplexMatrix rebuilt = ed.eigenvectors *
                            ed.eigenvalues.cast<Complex>().asDiagonal() *
                            ed.eigenvectors.adjoint();
    CHECK(max_abs(rebuilt - a) < 1e-10);
    CHECK(max_abs(ComplexMatrix(ed.eigenvectors.adjoint() * ed.eigenvectors) -
                  identity(8)) < 1e-10);
    for (int k = 1; k < 8; ++k) CHECK(ed.eigenvalues[k] >= ed.eigenvalues[k - 1]);
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    ComplexMatrix bad = random_matrix(3);
    bad(0, 1) += Complex(1.0, 0.0);  // ensure asymmetry
    CHECK_THROWS_AS(herm_eig(bad), ValidationError);
}

TEST_CASE("herm_eig eigenvalues of a density matrix sum to 1") {
    auto rho = test::random_density(3);
    auto ed = herm_eig(rho.matrix());
    CHECK(ed.eigenvalues.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("expm_unitary trivial cases") {
    ComplexMatrix h = random_hermitian(4);
    CHECK(max_abs(expm_unitary(h, 0.0) - identity(4)) < 1e-12);

    ComplexMatrix u = expm_unitary(pauli_z(), M_PI / 2.0);
    CHECK(std::abs(u(0, 0) - std::exp(Complex(0, -M_PI / 2.0))) < 1e-12);
    CHECK(std::abs(u(1, 1) - std::exp(Complex(0, M_PI / 2.0))) < 1e-12);
    CHECK(std::abs(u(0, 1)) < 1e-14);
}

TEST_CASE("expm_unitary agrees with a 30-term Taylor series") {
    ComplexMatrix h = random_hermitian(4);
    const double t = 0.3;
    ComplexMatrix term = identity(4);
    ComplexMatrix series = identity(4);
    for (int k = 1; k <= 30; ++k) {
        term = term * (Complex(0.0, -t) / double(k)) * h;
        series += term;
    }
    CHECK(max_abs(expm_unitary(h, t) - series) < 1e-10);
}

TEST_CASE("expm_unitary inverse and unitarity") {
    ComplexMatrix h = random_hermitian(8);
    for (double t : {0.37, 4.2, 10.0}) {
        ComplexMatrix u = expm_unitary(h, t);
        CHECK(max_abs(u * expm_unitary(h, -t) - identity(8)) < 1e-10);
        CHECK(max_abs(ComplexMatrix(u.adjoint() * u) - identity(8)) < 1e-10);
    }
}

TEST_CASE("psd_sqrt diagonal and square-back oracle") {
    CHECK(max_abs(psd_sqrt(identity(3)) - identity(3)) < 1e-12);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 0.25;
    d(1, 1) = 0.75;
    ComplexMatrix s = psd_sqrt(d);
    CHECK(std::abs(s(0, 0).real() - 0.5) < 1e-12);
    CHECK(std::abs(s(1, 1).real() - std::sqrt(0.75)) < 1e-12);

    auto rho = test::random_density(3);
    ComplexMatrix root = psd_sqrt(rho.matrix());
    CHECK(max_abs(root * root - rho.matrix()) < 1e-9);

    CHECK_THROWS_AS(psd_sqrt(-identity(2)), NumericError);
}

TEST_CASE("partial_trace product state and Bell state") {
    auto ra = test::random_density(1);
    auto rb = test::random_density(1);
    ComplexMatrix joint = kron(ra.matrix(), rb.matrix());
    CHECK(max_abs(partial_trace(joint, 2, {0}) - ra.matrix()) < 1e-12);
    CHECK(max_abs(partial_trace(joint, 2, {1}) - rb.matrix()) < 1e-12);

    Eigen::Vector4cd bell;
    bell << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    ComplexMatrix bell_dm = bell * bell.adjoint();
    CHECK(max_abs(partial_trace(bell_dm, 2, {0}) - identity(2) / 2.0) < 1e-12);
}

TEST_CASE("partial_trace matches the index-summation oracle") {
    auto rho = test::random_density(3);
    const std::vector<int> keep{0, 2};
    ComplexMatrix got = partial_trace(rho.matrix(), 3, keep);

    // Oracle: site 0 is the most significant bit of the basis index.
    ComplexMatrix want = ComplexMatrix::Zero(4, 4);
    auto idx = [](int b0, int b1, int b2) { return (b0 << 2) | (b1 << 1) | b2; };
    for (int r0 = 0; r0 < 2; ++r0)
        for (int r2 = 0; r2 < 2; ++r2)
            for (int c0 = 0; c0 < 2; ++c0)
                for (int c2 = 0; c2 < 2; ++c2)
                    for (int t = 0; t < 2; ++t)
                        want((r0 << 1) | r2, (c0 << 1) | c2) +=
                            rho.matrix()(idx(r0, t, r2), idx(c0, t, c2));
    CHECK(max_abs(got - want) < 1e-12);
}

TEST_CASE("partial_trace preserves the trace and validates input") {
    auto rho = test::random_density(4);
    for (const auto& keep : std::vector<std::vector<int>>{{0}, {1, 3}, {0, 1, 2, 3}}) {
        ComplexMatrix red = partial_trace(rho.matrix(), 4, keep);
        CHECK(std::abs(red.trace().real() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(partial_trace(rho.matrix(), 3, {0}), ValidationError);
    CHECK_THROWS_AS(partial_trace(rho.matrix(), 4, {}), ValidationError);
    CHECK_THROWS_AS(partial_trace(rho.matrix(), 4, {4}), ValidationError);
}
