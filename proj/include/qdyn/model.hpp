// model.hpp: physical generators for two decaying qubits coupled to one cavity mode.

#pragma once

#include <complex>

#include "qdyn/core.hpp"

namespace qdyn {

/// Physical constants, all in the same inverse-time unit (the coupling is the usual
/// reference and is set to 1 by the CLI).
class ModelParams {
public:
    ModelParams(double omega0, double omega, double lambda, double gamma);

    static ModelParams resonant(double omega, double lambda, double gamma) {
        return ModelParams(omega, omega, lambda, gamma);
    }

    double omega0() const noexcept { return omega0_; }
    double omega() const noexcept { return omega_; }
    double lambda() const noexcept { return lambda_; }
    double gamma() const noexcept { return gamma_; }

    /// omega + omega0; the counter-rotating coefficient oscillates at this frequency.
    double sum_frequency() const noexcept { return omega_ + omega0_; }
    /// omega0 - omega.
    double detuning() const noexcept { return omega0_ - omega_; }

private:
    double omega0_;
    double omega_;
    double lambda_;
    double gamma_;
};

enum class Family { Phi, Psi };

/// Entangled pure initial states
///   Phi: alpha |eg> + beta |ge>,   Psi: alpha |gg> + beta |ee>
/// with alpha real and beta = sqrt(1 - alpha^2) exp(i beta_phase).
class InitialState {
public:
    InitialState(Family family, double alpha, double beta_phase = 0.0);

    static InitialState from_alpha_sq(Family family, double alpha_sq, double beta_phase = 0.0);

    Family family() const noexcept { return family_; }
    double alpha() const noexcept { return alpha_; }
    double beta_phase() const noexcept { return beta_phase_; }
    std::complex<double> beta() const;

private:
    Family family_;
    double alpha_;
    double beta_phase_;
};

struct CoefficientPair {
    cd alpha_t;
    cd f_t;
};

/// (1 - exp(-i Delta t)) / (i Delta). Requires Delta > 0.
cd coeff_alpha(double t, double sum_frequency);

/// (exp(i delta t) - 1) / (i delta), switching to t + i delta t^2 / 2 when |delta t| < 1e-8.
cd coeff_f(double t, double detuning);

CoefficientPair coefficients(double t, const ModelParams& params);

/// Single-atom and collective operators on the two-qubit space.
struct AtomicOperators {
    ComplexMatrix sz1, sz2;
    ComplexMatrix sp1, sm1;
    ComplexMatrix sp2, sm2;
    ComplexMatrix sz_total;   // sz1 + sz2
    ComplexMatrix sp_total;   // sp1 + sp2
    ComplexMatrix sm_total;   // sm1 + sm2
    ComplexMatrix collective; // sp1 + sm1 + sp2 + sm2
};

const AtomicOperators& atomic_operators();

/// 2x2 single-qubit operators in {e, g} ordering.
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix sigma_z();
ComplexMatrix sigma_y();

/// Truncated cavity annihilation operator on photon numbers 0..n_max.
ComplexMatrix annihilation(Index n_max);

/// Local spontaneous-emission dissipator
///   (gamma/2) sum_i (2 L_i rho L_i^+ - L_i^+ L_i rho - rho L_i^+ L_i).
ComplexMatrix decay_dissipator(const ComplexMatrix& rho, double gamma,
                               std::span<const ComplexMatrix> lowering);

/// Right-hand side of the non-perturbative reduced master equation for the atoms,
/// with the operator ordering kept exactly as in the source equation:
///
///   d rho/dt = -i (w0/2) [Sz, rho]
///              - a(t) l^2 S [S+, rho] - f(t) l^2 S [S-, rho]
///              + a*(t) l^2 [S-, rho] S + f*(t) l^2 [S+, rho] S
///              + decay
///
/// where S = sigma_1^+ + sigma_1^- + sigma_2^+ + sigma_2^- and S+/S- are the collective
/// raising/lowering operators. This generator is not trace preserving for l > 0.
ComplexMatrix reduced_rhs(const ComplexMatrix& rho, double t, const ModelParams& params);

/// Which atom-field products enter the coupling. RotatingOnly drops sigma^+ a^+ and
/// sigma^- a; it exists for conservation tests of the exact model.
enum class CouplingTerms { Full, RotatingOnly };

/// H = (w0/2)(sz1 + sz2) + w a^+ a + l (S)(a^+ + a) on qubit1 (x) qubit2 (x) field.
ComplexMatrix full_hamiltonian(const ModelParams& params, Index n_max,
                               CouplingTerms terms = CouplingTerms::Full);

/// (sz1 + sz2)/2 + 1 + a^+ a on the joint space.
ComplexMatrix excitation_number(Index n_max);

DensityMatrix initial_density(const InitialState& state);

}  // namespace qdyn
