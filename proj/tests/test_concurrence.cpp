#include <doctest.h>

#include <numbers>
#include <random>

#include "qdyn/concurrence.hpp"
#include "qdyn/model.hpp"
#include "test_support.hpp"

using namespace qdyn;

namespace {

ComplexMatrix pure(Index a, Index b) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(a) = v(b) = 1.0 / std::sqrt(2.0);
    return projector(v);
}

ComplexMatrix basis_state(Index a) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(a, a) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("concurrence_general: reference states") {
    CHECK(concurrence_general(pure(basis::eg, basis::ge)).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence_general(pure(basis::ee, basis::gg)).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence_general(basis_state(basis::gg)).value == 0.0);
    CHECK(concurrence_general(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0)).value == 0.0);
    const DensityMatrix phi = initial_density(InitialState(Family::Phi, 0.6));
    CHECK(concurrence_general(phi).value == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(concurrence_general(phi).method == ConcurrenceMethod::General);
}

TEST_CASE("concurrence_general: errors") {
    CHECK_THROWS_AS(concurrence_general(ComplexMatrix(ComplexMatrix::Identity(2, 2))), InvalidStateError);
    ComplexMatrix bad = ComplexMatrix::Zero(4, 4);
    bad(0, 0) = 1.0;
    bad(3, 3) = -1.0;
    bad(0, 3) = bad(3, 0) = 0.0;
    CHECK_THROWS_AS(concurrence_general(ComplexMatrix(bad + ComplexMatrix::Identity(4, 4) * 0.25)),
                    InvalidStateError);
}

TEST_CASE("concurrence_general agrees with the Hermitian sqrt(rho) route") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix rho = trial % 2 ? testing::random_density(4, rng)
                                            : projector(testing::random_pure(4, rng));
        CHECK(std::abs(concurrence_general(rho).value - testing::concurrence_hermitian_route(rho)) < 1e-7);
    }
}

TEST_CASE("concurrence_x: reference states") {
    CHECK(concurrence_x(pure(basis::eg, basis::ge)).value == doctest::Approx(1.0).epsilon(1e-14));
    ComplexMatrix mix = ComplexMatrix::Zero(4, 4);
    mix(basis::ee, basis::ee) = mix(basis::gg, basis::gg) = 0.5;
    CHECK(concurrence_x(mix).value == 0.0);
    CHECK(concurrence_x(mix).method == ConcurrenceMethod::XForm);
}

TEST_CASE("concurrence_x rejects broken X structure with the offender") {
    ComplexMatrix rho = ComplexMatrix::Identity(4, 4) / 4.0;
    rho(basis::ee, basis::eg) = 0.01;
    rho(basis::eg, basis::ee) = 0.01;
    rho(basis::eg, basis::gg) = 0.02;
    rho(basis::gg, basis::eg) = 0.02;
    try {
        concurrence_x(rho);
        FAIL("expected XStructureError");
    } catch (const XStructureError& e) {
        CHECK(e.magnitude() == doctest::Approx(0.02));
        CHECK(((e.row() == basis::eg && e.col() == basis::gg) || (e.row() == basis::gg && e.col() == basis::eg)));
    }
    rho(basis::eg, basis::gg) = rho(basis::gg, basis::eg) = 5e-9;
    rho(basis::ee, basis::eg) = rho(basis::eg, basis::ee) = 0.0;
    CHECK_NOTHROW(concurrence_x(rho));
}

TEST_CASE("X form matches the general form on random X states") {
    std::mt19937_64 rng(67);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ComplexMatrix rho = testing::random_x_state(rng);
        worst = std::max(worst, std::abs(concurrence_x(rho).value - concurrence_general(rho).value));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("pure phi states: C = 2 alpha sqrt(1 - alpha^2), independent of the phase") {
    for (int k = 0; k <= 10; ++k) {
        const double alpha = 0.1 * k;
        const double expected = 2.0 * alpha * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
        for (double phase : {0.0, 0.7, 2.0, 4.5}) {
            const DensityMatrix rho = initial_density(InitialState(Family::Phi, alpha, phase));
            CHECK(std::abs(concurrence_general(rho).value - expected) < 1e-12);
            CHECK(std::abs(concurrence_x(rho).value - expected) < 1e-12);
        }
    }
}

TEST_CASE("product states are unentangled") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXcd a = testing::random_pure(2, rng);
        const Eigen::VectorXcd b = testing::random_pure(2, rng);
        const ComplexMatrix rho = tensor(projector(a), projector(b));
        CHECK(concurrence_general(rho).value < 1e-7);
    }
}

TEST_CASE("concurrence is invariant under local unitaries") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix rho = testing::random_density(4, rng);
        const Eigen::HouseholderQR<ComplexMatrix> q1(testing::random_matrix(2, rng));
        const Eigen::HouseholderQR<ComplexMatrix> q2(testing::random_matrix(2, rng));
        const ComplexMatrix u = tensor(ComplexMatrix(q1.householderQ()), ComplexMatrix(q2.householderQ()));
        const ComplexMatrix rotated = u * rho * u.adjoint();
        CHECK(std::abs(concurrence_general(rho).value - concurrence_general(rotated).value) < 1e-7);
    }
}
