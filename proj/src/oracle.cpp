#include "qdyn/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qdyn/concurrence.hpp"

namespace qdyn {

namespace {

constexpr cd I{0.0, 1.0};

ComplexMatrix vacuum(Index n_max) {
    const Index nf = basis::field_dim(n_max);
    ComplexMatrix v = ComplexMatrix::Zero(nf, nf);
    v(0, 0) = 1.0;
    return v;
}

}  // namespace

JointGenerator::JointGenerator(const ModelParams& params, Index n_max, CouplingTerms coupling)
    : h_(full_hamiltonian(params, n_max, coupling)), gamma_(params.gamma()) {
    const auto& op = atomic_operators();
    const ComplexMatrix id_f = ComplexMatrix::Identity(basis::field_dim(n_max), basis::field_dim(n_max));
    lowering_ = {tensor(op.sm1, id_f), tensor(op.sm2, id_f)};
    ComplexMatrix loss = ComplexMatrix::Zero(h_.rows(), h_.cols());
    for (const auto& l : lowering_) {
        raising_.push_back(l.adjoint());
        loss += raising_.back() * l;
    }
    h_eff_ = h_ - I * (0.5 * gamma_) * loss;
    h_eff_adjoint_ = h_eff_.adjoint();
}

ComplexMatrix JointGenerator::operator()(const ComplexMatrix& rho, double) const {
    // -i(H_eff rho - rho H_eff^+) + gamma sum L rho L^+ equals -i[H, rho] + decay.
    ComplexMatrix out = h_eff_ * rho;
    out.noalias() -= rho * h_eff_adjoint_;
    out *= -I;
    if (gamma_ != 0.0) {
        for (std::size_t i = 0; i < lowering_.size(); ++i) {
            out.noalias() += gamma_ * (lowering_[i] * rho * raising_[i]);
        }
    }
    return out;
}

OracleRun oracle_evolve(const DensityMatrix& atoms0, const OracleConfig& cfg) {
    if (cfg.n_max < 1) throw std::invalid_argument("oracle_evolve: n_max must be >= 1");
    if (atoms0.dim() != basis::pair_dim) {
        throw std::invalid_argument("oracle_evolve: atomic state must be 4x4");
    }
    const JointGenerator generator(cfg.params, cfg.n_max, cfg.coupling);
    const ComplexMatrix rho0 = tensor(atoms0.matrix(), vacuum(cfg.n_max));
    const std::array<Index, 2> dims{basis::pair_dim, basis::field_dim(cfg.n_max)};
    const std::array<std::size_t, 1> keep{0};
    const ComplexMatrix number =
        cfg.record_excitation_number ? excitation_number(cfg.n_max) : ComplexMatrix{};

    OracleRun run;
    propagate(generator, rho0, cfg.grid, cfg.sample_every,
              [&](double t, const ComplexMatrix& joint) {
                  run.max_joint_trace_drift =
                      std::max(run.max_joint_trace_drift, std::abs(joint.trace() - 1.0));
                  run.max_joint_hermiticity_defect =
                      std::max(run.max_joint_hermiticity_defect, hermiticity_defect(joint));
                  if (cfg.record_excitation_number) {
                      run.excitation_number.push_back((number * joint).trace().real());
                  }
                  ComplexMatrix atoms = partial_trace(joint, dims, keep);
                  run.reduced.times.push_back(t);
                  run.reduced.diagnostics.push_back(diagnose(atoms));
                  run.reduced.states.push_back(DensityMatrix::evolved(std::move(atoms), atoms0.label()));
              });
    return run;
}

OracleRun oracle_evolve(const InitialState& state, const OracleConfig& cfg) {
    return oracle_evolve(initial_density(state), cfg);
}

std::vector<double> concurrence_series(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& rho : traj.states) {
        try {
            out.push_back(concurrence_x(rho).value);
        } catch (const XStructureError&) {
            out.push_back(concurrence_general(rho).value);
        }
    }
    return out;
}

CutoffConvergence oracle_converged(const InitialState& state, const OracleConfig& cfg, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("oracle_converged: tol must be > 0");
    OracleConfig wider = cfg;
    wider.n_max = cfg.n_max + 2;
    wider.record_excitation_number = false;
    const auto base = concurrence_series(oracle_evolve(state, cfg).reduced);
    const auto ref = concurrence_series(oracle_evolve(state, wider).reduced);
    CutoffConvergence out{cfg.n_max, 0.0, false};
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.max_concurrence_shift = std::max(out.max_concurrence_shift, std::abs(base[i] - ref[i]));
    }
    out.converged = out.max_concurrence_shift <= tol;
    return out;
}

}  // namespace qdyn
