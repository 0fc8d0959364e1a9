#include <catch2/catch_amalgamated.hpp>

#include "corrdyn/corrdyn.hpp"

using namespace corrdyn;

namespace {

Rng make_rng(unsigned seed = 42) { return Rng(seed); }

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("tensor: identity and projector cases") {
    const Operator id2 = Operator::Identity(2, 2);
    CHECK(max_abs(tensor(id2, id2) - Operator::Identity(4, 4)) == 0.0);

    Operator proj0 = Operator::Zero(2, 2);
    proj0(0, 0) = 1.0;
    const Operator m = tensor(pauli_z(), proj0);
    Operator expected = Operator::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(2, 2) = -1.0;
    CHECK(max_abs(m - expected) == 0.0);
}

TEST_CASE("tensor: quadruple-index brute-force oracle") {
    auto rng = make_rng();
    const Operator a = random_matrix(3, 3, rng);
    const Operator b = random_matrix(4, 4, rng);
    const Operator t = tensor(a, b);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    CHECK(t(i * 4 + k, j * 4 + l) == a(i, j) * b(k, l));
}

TEST_CASE("partial traces: product states and index-sum oracle") {
    auto rng = make_rng(7);
    const Operator a = random_matrix(2, 2, rng);
    const Operator b = random_matrix(3, 3, rng);
    const Operator ab = tensor(a, b);
    CHECK(max_abs(partial_trace_env(ab, 2, 3) - b.trace() * a) < 1e-12);
    CHECK(max_abs(partial_trace_sys(ab, 2, 3) - a.trace() * b) < 1e-12);

    // Bell state marginal is maximally mixed
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const Operator bell_state = bell * bell.adjoint();
    CHECK(max_abs(partial_trace_env(bell_state, 2, 2) - 0.5 * Operator::Identity(2, 2)) < 1e-14);

    // generic 6x6 against explicit double loops
    const Operator m = random_matrix(6, 6, rng);
    Operator env_oracle = Operator::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k) env_oracle(i, j) += m(i * 3 + k, j * 3 + k);
    CHECK(max_abs(partial_trace_env(m, 2, 3) - env_oracle) == 0.0);

    Operator sys_oracle = Operator::Zero(3, 3);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 2; ++i) sys_oracle(k, l) += m(i * 3 + k, i * 3 + l);
    CHECK(max_abs(partial_trace_sys(m, 2, 3) - sys_oracle) == 0.0);

    CHECK(std::abs(partial_trace_env(m, 2, 3).trace() - m.trace()) < 1e-12);
    CHECK_THROWS_AS(partial_trace_env(m, 2, 2), DimensionMismatch);
}

TEST_CASE("eig_hermitian: Pauli spectra and reconstruction") {
    const auto ez = eig_hermitian(pauli_z());
    CHECK(ez.values(0) == Catch::Approx(-1.0));
    CHECK(ez.values(1) == Catch::Approx(1.0));

    const auto ex = eig_hermitian(pauli_x());
    CHECK(ex.values(0) == Catch::Approx(-1.0));
    CHECK(ex.values(1) == Catch::Approx(1.0));
    // eigenvectors of sigma_x are (|0> -+ |1>)/sqrt(2) up to phase
    CHECK(std::abs(std::abs(ex.vectors(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);

    auto rng = make_rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + int(rng() % 15);
        const Operator a = random_hermitian(d, rng);
        const auto eig = eig_hermitian(a);
        const Operator back =
            eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        CHECK((back - a).norm() <= 1e-10 * a.norm());
        CHECK(max_abs(eig.vectors.adjoint() * eig.vectors - Operator::Identity(d, d)) < 1e-12);
    }

    CHECK_THROWS_AS(eig_hermitian(sigma_plus()), NotHermitian);
}

TEST_CASE("hermitian_basis: Pauli case and Gram matrices") {
    const auto pauli = hermitian_basis(2);
    REQUIRE(pauli.size() == 4);
    CHECK(max_abs(pauli[0] - Operator::Identity(2, 2) / std::sqrt(2.0)) < 1e-15);
    CHECK(max_abs(pauli[1] - pauli_x() / std::sqrt(2.0)) < 1e-15);
    CHECK(max_abs(pauli[2] - pauli_y() / std::sqrt(2.0)) < 1e-15);
    CHECK(max_abs(pauli[3] - pauli_z() / std::sqrt(2.0)) < 1e-15);

    for (int d : {3, 4}) {
        const auto basis = hermitian_basis(d);
        REQUIRE(int(basis.size()) == d * d);
        for (size_t i = 0; i < basis.size(); ++i) {
            CHECK(max_abs(basis[i] - basis[i].adjoint()) < 1e-14);
            if (i > 0) CHECK(std::abs(basis[i].trace()) < 1e-14);
            for (size_t j = 0; j < basis.size(); ++j) {
                const Complex gram = (basis[i].adjoint() * basis[j]).trace();
                CHECK(std::abs(gram - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("vectorize: row-major stacking and trace identity") {
    const CVector v = vectorize(Operator::Identity(2, 2));
    CHECK(v(0) == Complex(1.0));
    CHECK(v(1) == Complex(0.0));
    CHECK(v(2) == Complex(0.0));
    CHECK(v(3) == Complex(1.0));

    auto rng = make_rng(11);
    const Operator x = random_matrix(3, 3, rng);
    CHECK(max_abs(devectorize(vectorize(x)) - x) == 0.0);
    const CVector vec_id = vectorize(Operator::Identity(3, 3));
    CHECK(std::abs(vec_id.dot(vectorize(x)) - x.trace()) < 1e-13);
}

TEST_CASE("superop_from_action: identity, sandwich and rank-one maps") {
    CHECK(max_abs(superop_from_action([](const Operator& x) { return x; }, 3).m -
                  Operator::Identity(9, 9)) == 0.0);

    auto rng = make_rng(13);
    const Operator a = random_matrix(3, 3, rng);
    const Operator b = random_matrix(3, 3, rng);
    const SuperOp s = superop_from_action([&](const Operator& x) { return a * x * b; }, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const Operator x = random_matrix(3, 3, rng);
        CHECK(max_abs(s.apply(x) - a * x * b) < 1e-12);
    }
    CHECK(max_abs(s.m - superop_sandwich(a, b).m) < 1e-13);

    const Operator c = random_matrix(3, 3, rng);
    const SuperOp trace_map =
        superop_from_action([&](const Operator& x) { return c * x.trace(); }, 3);
    const CVector vec_id = vectorize(Operator::Identity(3, 3));
    CHECK(max_abs(trace_map.m - vectorize(c) * vec_id.adjoint()) < 1e-14);
}

TEST_CASE("Choi rearrangement: identity map, sandwich map, round trips") {
    const SuperOp identity4 = superop_identity(2);
    const Operator choi_id = choi_from_superop(identity4);
    // maximally entangled Choi: sum_ij E_ij (x) E_ij, eigenvalues {2,0,0,0}
    const auto eig = eig_hermitian(choi_id);
    CHECK(eig.values(3) == Catch::Approx(2.0));
    CHECK(std::abs(eig.values(0)) < 1e-14);

    auto rng = make_rng(17);
    const Operator a = random_matrix(2, 2, rng);
    const SuperOp conj_map =
        superop_from_action([&](const Operator& x) { return a * x * a.adjoint(); }, 2);
    const Operator choi = choi_from_superop(conj_map);
    // rank one; the eigenvector reshapes back to a multiple of a
    const auto ce = eig_hermitian(choi);
    CHECK(ce.values(3) == Catch::Approx(a.squaredNorm()));
    const Operator back = kraus_from_choi_vector(ce.vectors.col(3)) * std::sqrt(ce.values(3));
    // compare as maps (phase-free)
    for (int trial = 0; trial < 5; ++trial) {
        const Operator x = random_matrix(2, 2, rng);
        CHECK(max_abs(back * x * back.adjoint() - a * x * a.adjoint()) < 1e-12);
    }

    const Operator m = random_matrix(9, 9, rng);
    const SuperOp s{3, m};
    CHECK(max_abs(superop_from_choi(choi_from_superop(s)).m - m) == 0.0);
}

TEST_CASE("Hermiticity preservation iff Hermitian Choi") {
    auto rng = make_rng(19);
    const Operator a = random_matrix(2, 2, rng);
    const SuperOp hp =
        superop_from_action([&](const Operator& x) { return a * x * a.adjoint(); }, 2);
    CHECK(hermiticity_preserving(hp));

    const Operator b = random_matrix(2, 2, rng);
    const SuperOp not_hp = superop_from_action([&](const Operator& x) { return a * x * b; }, 2);
    CHECK_FALSE(hermiticity_preserving(not_hp));
}

TEST_CASE("propagator: diagonal case and group property") {
    CHECK(max_abs(propagator(pauli_z(), 0.0) - Operator::Identity(2, 2)) < 1e-15);

    const double t = 0.7;
    const Operator u = propagator(pauli_z(), t);
    CHECK(std::abs(u(0, 0) - std::exp(-kImag * t)) < 1e-13);
    CHECK(std::abs(u(1, 1) - std::exp(kImag * t)) < 1e-13);

    auto rng = make_rng(23);
    const Operator h = random_hermitian(4, rng);
    const Operator u1 = propagator(h, 0.3);
    const Operator u2 = propagator(h, 1.1);
    CHECK(max_abs(propagator(h, 1.4) - u1 * u2) < 1e-12);
    CHECK(max_abs(u1 * u1.adjoint() - Operator::Identity(4, 4)) < 1e-12);
}
