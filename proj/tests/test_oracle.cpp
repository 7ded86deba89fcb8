#include <doctest.h>

#include <iostream>

#include "qdyn/concurrence.hpp"
#include "qdyn/oracle.hpp"

using namespace qdyn;

namespace {

DensityMatrix basis_pair_state(Index a) {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(a, a) = 1.0;
    return DensityMatrix(m);
}

}  // namespace

TEST_CASE("decoupled atoms keep their concurrence") {
    const OracleConfig cfg{ModelParams(3.0, 3.0, 0.0, 0.0), 2, TimeGrid(0.0, 3.0, 1e-3), 50};
    const OracleRun run = oracle_evolve(InitialState::from_alpha_sq(Family::Phi, 0.3), cfg);
    const auto c = concurrence_series(run.reduced);
    for (double v : c) CHECK(std::abs(v - c.front()) < 1e-10);
}

TEST_CASE("decoupled decay from |ee> follows exp(-2 gamma t)") {
    const double gamma = 0.1;
    const OracleConfig cfg{ModelParams(1.0, 1.0, 0.0, gamma), 1, TimeGrid(0.0, 10.0, 1e-3), 100};
    const OracleRun run = oracle_evolve(basis_pair_state(basis::ee), cfg);
    for (std::size_t i = 0; i < run.reduced.size(); ++i) {
        CHECK(std::abs(run.reduced.states[i](0, 0).real() - std::exp(-2.0 * gamma * run.reduced.times[i])) <= 1e-8);
    }
}

TEST_CASE("joint evolution is trace preserving without decay") {
    const OracleConfig cfg{ModelParams::resonant(10.0, 1.0, 0.0), 8, TimeGrid(0.0, 5.0, 1e-3), 10};
    const OracleRun run = oracle_evolve(InitialState::from_alpha_sq(Family::Phi, 0.5), cfg);
    CHECK(run.max_joint_trace_drift <= 1e-8);
    CHECK(run.max_joint_hermiticity_defect <= 1e-10);
    for (const auto& d : run.reduced.diagnostics) CHECK(d.min_eigenvalue >= -1e-6);
}

TEST_CASE("JointGenerator equals -i[H, rho] + decay") {
    const ModelParams p(2.0, 2.0, 0.5, 0.3);
    const Index n_max = 2;
    const JointGenerator gen(p, n_max, CouplingTerms::Full);
    const auto& op = atomic_operators();
    const ComplexMatrix id_f = ComplexMatrix::Identity(n_max + 1, n_max + 1);
    const std::array<ComplexMatrix, 2> lowering{tensor(op.sm1, id_f), tensor(op.sm2, id_f)};
    Eigen::VectorXcd v = Eigen::VectorXcd::LinSpaced(12, 0.1, 1.2);
    v(3) = cd(0.2, 0.4);
    const ComplexMatrix rho = projector(v) / v.squaredNorm();
    const ComplexMatrix expected = cd(0, -1) * commutator(gen.hamiltonian(), rho) +
                                   decay_dissipator(rho, 0.3, lowering);
    CHECK((gen(rho, 0.0) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rotating-wave toggle conserves excitations") {
    OracleConfig cfg{ModelParams::resonant(1.0, 1.0, 0.0), 6, TimeGrid(0.0, 10.0, 1e-3), 20,
                     CouplingTerms::RotatingOnly, true};
    const OracleRun run = oracle_evolve(basis_pair_state(basis::eg), cfg);
    REQUIRE(!run.excitation_number.empty());
    for (double n : run.excitation_number) CHECK(std::abs(n - 1.0) <= 1e-8);
    for (const auto& rho : run.reduced.states) CHECK(std::abs(rho(basis::ee, basis::ee)) <= 1e-10);

    cfg.coupling = CouplingTerms::Full;
    const OracleRun full = oracle_evolve(basis_pair_state(basis::eg), cfg);
    double max_ee = 0.0;
    for (const auto& rho : full.reduced.states) max_ee = std::max(max_ee, rho(basis::ee, basis::ee).real());
    CHECK(max_ee > 1e-3);
}

TEST_CASE("cutoff convergence") {
    SUBCASE("no coupling: converged at n_max = 1") {
        const OracleConfig cfg{ModelParams::resonant(2.0, 0.0, 0.1), 1, TimeGrid(0.0, 2.0, 1e-3), 10};
        const auto res = oracle_converged(InitialState::from_alpha_sq(Family::Phi, 0.5), cfg, 1e-12);
        CHECK(res.n_max_used == 1);
        CHECK(res.max_concurrence_shift == 0.0);
        CHECK(res.converged);
    }
    SUBCASE("omega = 10 lambda converges by n_max = 6") {
        const OracleConfig cfg{ModelParams::resonant(10.0, 1.0, 0.1), 6, TimeGrid(0.0, 5.0, 1e-3), 10};
        const auto res = oracle_converged(InitialState::from_alpha_sq(Family::Phi, 0.5), cfg, 1e-4);
        CHECK(res.max_concurrence_shift <= 1e-4);
        CHECK(res.converged);
    }
    SUBCASE("omega = lambda: cutoff artifacts are gone by n_max = 16") {
        // Lower cutoffs show spurious late revivals from photons reflecting off the truncation.
        const OracleConfig cfg{ModelParams::resonant(1.0, 1.0, 0.1), 16, TimeGrid(0.0, 5.0, 2e-3), 5};
        const auto res = oracle_converged(InitialState::from_alpha_sq(Family::Phi, 0.5), cfg, 1e-3);
        MESSAGE("omega = lambda, lambda t <= 5, n_max 16 vs 18: shift " << res.max_concurrence_shift);
        CHECK(res.converged);
    }
}
