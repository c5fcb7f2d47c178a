#include "gcs/error.hpp"
#include "gcs/hilbert.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gcs;
using testing::state;

namespace {
const double kRootHalf = 1.0 / std::sqrt(2.0);
}

TEST_SUITE("hilbert") {

TEST_CASE("inner product on basis vectors and conjugate-linear first slot") {
    const auto e1 = StateVector::basis(2, 0);
    const auto e2 = StateVector::basis(2, 1);
    CHECK(inner_product(e1, e1) == Complex(1.0));
    CHECK(inner_product(e1, e2) == Complex(0.0));

    // (1, i)/√2 · (1, -i)/√2: (1·1 + conj(i)·(-i)) / 2 = (1 + (-i)(-i)) / 2 = 0
    const auto u = state({kRootHalf, Complex(0, kRootHalf)});
    const auto v = state({kRootHalf, Complex(0, -kRootHalf)});
    CHECK(std::abs(inner_product(u, v)) < 1e-15);

    const auto w = state({Complex(0, 1), 0});
    CHECK(inner_product(w, e1) == Complex(0, -1));  // conj(i)
    CHECK(inner_product(w, StateVector::basis(2, 0) * Complex(0, 1)) == Complex(1.0));
}

TEST_CASE("inner product rejects mismatched dimensions") {
    CHECK_THROWS_AS(inner_product(StateVector::basis(2, 0), StateVector::basis(3, 0)),
                    gcs::Error);
}

TEST_CASE("norm") {
    CHECK(norm(StateVector::zero(3)) == 0.0);
    CHECK(norm(StateVector::basis(4, 2)) == 1.0);
    CHECK(norm(state({3.0, Complex(0, 4.0)})) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("state construction rejects empty and non-finite amplitudes") {
    CHECK_THROWS_AS(StateVector(std::vector<Complex>{}), gcs::Error);
    CHECK_THROWS_AS(state({1.0, std::nan("")}), gcs::Error);
}

TEST_CASE("expectation") {
    const auto z = testing::pauli_z();
    CHECK(expectation(z, StateVector::basis(2, 0)) == Complex(1.0));
    CHECK(std::abs(expectation(z, state({kRootHalf, kRootHalf}))) < 1e-15);

    std::mt19937_64 rng(11);
    const auto psi = random_state(5, rng);
    CHECK(std::abs(expectation(HermitianOperator::identity(5), psi) - 1.0) < 1e-14);
}

TEST_CASE("variance") {
    const auto z = testing::pauli_z();
    CHECK(variance(z, StateVector::basis(2, 0)) == 0.0);
    CHECK(variance(z, state({kRootHalf, kRootHalf})) == doctest::Approx(1.0).epsilon(1e-14));
    std::mt19937_64 rng(3);
    CHECK(variance(HermitianOperator::identity(6), random_state(6, rng)) < 1e-14);
}

TEST_CASE("normalization policy: silent, warn-and-repair, reject") {
    const auto z = testing::pauli_z();
    testing::WarningCapture capture;
    CHECK(expectation(z, StateVector::basis(2, 0)) == Complex(1.0));
    CHECK(capture.messages.empty());

    const auto slightly_off = state({1.0 + 1e-8, 0.0});
    CHECK(std::abs(expectation(z, slightly_off) - 1.0) < 1e-15);
    CHECK(capture.contains("renormalizing"));

    CHECK_THROWS_AS(variance(z, state({1.1, 0.0})), gcs::Error);
    try {
        variance(z, state({1.1, 0.0}));
    } catch (const gcs::Error &e) {
        CHECK(e.code() == ErrorCode::NotNormalized);
    }
}

TEST_CASE("Hermiticity is validated, not repaired") {
    CHECK_NOTHROW(testing::op2(1, Complex(2, 3), Complex(2, -3), -1));
    try {
        testing::op2(1, Complex(2, 3), Complex(2, 3), -1);
        FAIL("expected a Hermiticity error");
    } catch (const gcs::Error &e) {
        CHECK(e.code() == ErrorCode::NotHermitian);
        CHECK(std::string(e.what()).find("(0,1) and (1,0)") != std::string::npos);
    }
    // Within 1e-12 passes; beyond fails.
    CHECK_NOTHROW(testing::op2(1, 1.0, 1.0 + 5e-13, 0));
    CHECK_THROWS_AS(testing::op2(1, 1.0, 1.0 + 5e-12, 0), gcs::Error);
    CHECK_THROWS_AS(testing::op2(Complex(1, 1e-6), 0, 0, 0), gcs::Error);
}

TEST_CASE("deviation vector") {
    const auto z = testing::pauli_z();
    CHECK(norm(deviation_vector(z, StateVector::basis(2, 1))) == 0.0);

    const auto dev = deviation_vector(z, state({kRootHalf, kRootHalf}));
    CHECK(std::abs(dev[0] - kRootHalf) < 1e-15);
    CHECK(std::abs(dev[1] + kRootHalf) < 1e-15);

    const HermitianOperator with_units(2, {1, 0, 0, -1}, std::string("m"));
    CHECK(deviation_vector(with_units, StateVector::basis(2, 0)).units() == "m");
}

TEST_CASE("commutator and anticommutator expectations") {
    const auto x = testing::pauli_x();
    const auto y = testing::pauli_y();
    const auto e1 = StateVector::basis(2, 0);

    // [σx, σy] = 2iσz, ⟨σz⟩ = 1 on (1, 0)
    const Complex c = commutator_expectation(x, y, e1);
    CHECK(std::abs(c - Complex(0, 2)) < 1e-15);

    const double diag_a[] = {1.0, 2.0, 3.0};
    const double diag_b[] = {-1.0, 0.5, 4.0};
    std::mt19937_64 rng(5);
    const auto psi = random_state(3, rng);
    CHECK(std::abs(commutator_expectation(HermitianOperator::diagonal(diag_a),
                                          HermitianOperator::diagonal(diag_b), psi)) < 1e-15);
    CHECK(std::abs(commutator_expectation(x, x, random_state(2, rng))) < 1e-15);

    // {A, A} on an eigenstate with eigenvalue 3 → 2·3²
    const auto e3 = StateVector::basis(3, 2);
    CHECK(std::abs(anticommutator_expectation(HermitianOperator::diagonal(diag_a),
                                              HermitianOperator::diagonal(diag_a), e3) -
                   18.0) < 1e-14);

    // {σx, σy} = 0, checked against explicit matrix products
    for (int i = 0; i < 20; ++i) {
        const auto s = random_state(2, rng);
        const Complex ac = anticommutator_expectation(x, y, s);
        const auto mx = oracle::entries(x), my = oracle::entries(y);
        auto xy = oracle::matmul(mx, my, 2), yx = oracle::matmul(my, mx, 2);
        oracle::Mat sum(4);
        for (int k = 0; k < 4; ++k)
            sum[k] = xy[k] + yx[k];
        CHECK(std::abs(ac - oracle::sandwich(sum, oracle::amps(s))) < 1e-14);
        CHECK(std::abs(ac) < 1e-14);
    }

    // {I, B} = 2B
    const auto b = random_hermitian(4, rng);
    const auto s4 = random_state(4, rng);
    CHECK(std::abs(anticommutator_expectation(HermitianOperator::identity(4), b, s4) -
                   2.0 * expectation(b, s4)) < 1e-13);
}

TEST_CASE("random sampling produces unit, orthogonal and Hermitian objects") {
    std::mt19937_64 rng(99);
    for (std::size_t dim = 2; dim <= 16; ++dim) {
        const auto psi = random_state(dim, rng);
        CHECK(std::abs(norm(psi) - 1.0) < 1e-14);
        const auto m = random_state_orthogonal_to(psi, rng);
        CHECK(std::abs(norm(m) - 1.0) < 1e-14);
        CHECK(std::abs(inner_product(psi, m)) < 1e-14);
        CHECK_NOTHROW(random_hermitian(dim, rng));
    }
    CHECK_THROWS_AS(random_state_orthogonal_to(StateVector::basis(1, 0), rng), gcs::Error);
}

TEST_CASE("property: conjugate symmetry of the inner product") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 500; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_vector(dim, rng);
        const auto b = random_vector(dim, rng);
        CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) <= 1e-15);
    }
}

TEST_CASE("property: squared deviation norm equals variance (two routes)") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const double via_deviation = norm_squared(deviation_vector(a, psi));
        const double via_matrix = oracle::variance(oracle::entries(a), oracle::amps(psi));
        CHECK(std::abs(via_deviation - via_matrix) <= 1e-10);
        CHECK(std::abs(via_deviation - variance(a, psi)) <= 1e-10);
    }
}

TEST_CASE("property: variance is invariant under a real shift of the operator") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        CHECK(std::abs(variance(a, psi) - variance(a.shifted(shift(rng)), psi)) <= 1e-10);
    }
}

TEST_CASE("property: commutator expectation is purely imaginary, anticommutator real") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        CHECK(std::abs(commutator_expectation(a, b, psi).real()) <= 1e-10);
        CHECK(std::abs(anticommutator_expectation(a, b, psi).imag()) <= 1e-10);
        CHECK(std::abs(expectation(a, psi).imag()) <= 1e-10);
    }
}

} // TEST_SUITE
