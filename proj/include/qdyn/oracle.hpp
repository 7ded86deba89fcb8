// oracle.hpp: exact atoms + truncated-cavity evolution used as ground truth for the
// reduced master equation.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/integrator.hpp"
#include "qdyn/model.hpp"

namespace qdyn {

struct OracleConfig {
    ModelParams params;
    Index n_max = 8;
    TimeGrid grid;
    std::int64_t sample_every = 10;
    // Test surface only: drop the counter-rotating products from the coupling.
    CouplingTerms coupling = CouplingTerms::Full;
    bool record_excitation_number = false;
};

struct OracleRun {
    Trajectory reduced;                      // atoms-only snapshots
    double max_joint_trace_drift{};          // max |Tr rho_joint - 1|
    double max_joint_hermiticity_defect{};   // max |rho - rho^+| on the joint space
    std::vector<double> excitation_number;   // <N>(t) when requested
};

/// Joint generator -i[H, rho] + atomic decay on qubit1 (x) qubit2 (x) field.
class JointGenerator {
public:
    JointGenerator(const ModelParams& params, Index n_max, CouplingTerms coupling);

    ComplexMatrix operator()(const ComplexMatrix& rho, double t) const;

    const ComplexMatrix& hamiltonian() const noexcept { return h_; }

private:
    ComplexMatrix h_;
    ComplexMatrix h_eff_;          // H - i (gamma/2) sum L^+ L
    ComplexMatrix h_eff_adjoint_;
    std::vector<ComplexMatrix> lowering_;
    std::vector<ComplexMatrix> raising_;
    double gamma_;
};

/// Atoms start in `atoms0`, the field in vacuum.
OracleRun oracle_evolve(const DensityMatrix& atoms0, const OracleConfig& cfg);
OracleRun oracle_evolve(const InitialState& state, const OracleConfig& cfg);

struct CutoffConvergence {
    Index n_max_used{};
    double max_concurrence_shift{};
    bool converged{};
};

/// Compares concurrence at n_max and n_max + 2 over the grid.
CutoffConvergence oracle_converged(const InitialState& state, const OracleConfig& cfg, double tol);

/// Concurrence series of a trajectory (X form, general form if the X pattern breaks).
std::vector<double> concurrence_series(const Trajectory& traj);

}  // namespace qdyn
