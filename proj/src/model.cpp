#include "qdyn/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdyn {

namespace {

constexpr cd I{0.0, 1.0};

// Below this |delta t| the closed form of f(t) loses digits to cancellation.
constexpr double kSeriesThreshold = 1e-8;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

}  // namespace

ModelParams::ModelParams(double omega0, double omega, double lambda, double gamma)
    : omega0_(omega0), omega_(omega), lambda_(lambda), gamma_(gamma) {
    require(std::isfinite(omega0) && omega0 > 0.0, "ModelParams: omega0 must be > 0");
    require(std::isfinite(omega) && omega > 0.0, "ModelParams: omega must be > 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "ModelParams: lambda must be >= 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "ModelParams: gamma must be >= 0");
}

InitialState::InitialState(Family family, double alpha, double beta_phase)
    : family_(family), alpha_(alpha), beta_phase_(beta_phase) {
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
            "InitialState: alpha must lie in [0, 1]");
    require(std::isfinite(beta_phase) && beta_phase >= 0.0 && beta_phase < 2.0 * std::numbers::pi,
            "InitialState: beta_phase must lie in [0, 2 pi)");
}

InitialState InitialState::from_alpha_sq(Family family, double alpha_sq, double beta_phase) {
    require(std::isfinite(alpha_sq) && alpha_sq >= 0.0 && alpha_sq <= 1.0,
            "InitialState: alpha^2 must lie in [0, 1]");
    return InitialState(family, std::sqrt(alpha_sq), beta_phase);
}

std::complex<double> InitialState::beta() const {
    const double modulus = std::sqrt(std::max(0.0, 1.0 - alpha_ * alpha_));
    return std::polar(modulus, beta_phase_);
}

cd coeff_alpha(double t, double sum_frequency) {
    require(t >= 0.0, "coeff_alpha: t must be >= 0");
    require(sum_frequency > 0.0, "coeff_alpha: sum frequency must be > 0");
    return (1.0 - std::exp(-I * (sum_frequency * t))) / (I * sum_frequency);
}

cd coeff_f(double t, double detuning) {
    require(t >= 0.0, "coeff_f: t must be >= 0");
    const double phase = detuning * t;
    if (std::abs(phase) < kSeriesThreshold) {
        return cd(t, 0.5 * detuning * t * t);
    }
    return (std::exp(I * phase) - 1.0) / (I * detuning);
}

CoefficientPair coefficients(double t, const ModelParams& params) {
    return {coeff_alpha(t, params.sum_frequency()), coeff_f(t, params.detuning())};
}

ComplexMatrix sigma_plus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(basis::excited, basis::ground) = 1.0;
    return m;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(basis::ground, basis::excited) = 1.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(basis::excited, basis::excited) = 1.0;
    m(basis::ground, basis::ground) = -1.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = -I;
    m(1, 0) = I;
    return m;
}

const AtomicOperators& atomic_operators() {
    static const AtomicOperators ops = [] {
        const ComplexMatrix id2 = identity(2);
        AtomicOperators o;
        o.sz1 = tensor(sigma_z(), id2);
        o.sz2 = tensor(id2, sigma_z());
        o.sp1 = tensor(sigma_plus(), id2);
        o.sm1 = tensor(sigma_minus(), id2);
        o.sp2 = tensor(id2, sigma_plus());
        o.sm2 = tensor(id2, sigma_minus());
        o.sz_total = o.sz1 + o.sz2;
        o.sp_total = o.sp1 + o.sp2;
        o.sm_total = o.sm1 + o.sm2;
        o.collective = o.sp_total + o.sm_total;
        return o;
    }();
    return ops;
}

ComplexMatrix annihilation(Index n_max) {
    require(n_max >= 0, "annihilation: n_max must be >= 0");
    const Index n = basis::field_dim(n_max);
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (Index k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

ComplexMatrix decay_dissipator(const ComplexMatrix& rho, double gamma,
                               std::span<const ComplexMatrix> lowering) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    if (gamma == 0.0) return out;
    for (const auto& l : lowering) {
        const ComplexMatrix ld = l.adjoint();
        const ComplexMatrix n = ld * l;
        out.noalias() += 2.0 * (l * rho * ld);
        out.noalias() -= n * rho;
        out.noalias() -= rho * n;
    }
    return (0.5 * gamma) * out;
}

ComplexMatrix reduced_rhs(const ComplexMatrix& rho, double t, const ModelParams& params) {
    if (rho.rows() != basis::pair_dim || rho.cols() != basis::pair_dim) {
        throw std::invalid_argument("reduced_rhs: rho must be 4x4, got " +
                                    std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
    }
    const auto& op = atomic_operators();
    const auto [a, f] = coefficients(t, params);
    const double l2 = params.lambda() * params.lambda();
    const ComplexMatrix& s = op.collective;

    const ComplexMatrix c_plus = commutator(op.sp_total, rho);
    const ComplexMatrix c_minus = commutator(op.sm_total, rho);

    ComplexMatrix out = (-I * (0.5 * params.omega0())) * commutator(op.sz_total, rho);
    out.noalias() -= (a * l2) * (s * c_plus);
    out.noalias() -= (f * l2) * (s * c_minus);
    out.noalias() += (std::conj(a) * l2) * (c_minus * s);
    out.noalias() += (std::conj(f) * l2) * (c_plus * s);

    const std::array<ComplexMatrix, 2> lowering{op.sm1, op.sm2};
    out += decay_dissipator(rho, params.gamma(), lowering);
    return out;
}

ComplexMatrix full_hamiltonian(const ModelParams& params, Index n_max, CouplingTerms terms) {
    require(n_max >= 1, "full_hamiltonian: n_max must be >= 1");
    const auto& op = atomic_operators();
    const Index nf = basis::field_dim(n_max);
    const ComplexMatrix a = annihilation(n_max);
    const ComplexMatrix ad = a.adjoint();
    const ComplexMatrix id_f = identity(nf);
    const ComplexMatrix id_a = identity(basis::pair_dim);

    ComplexMatrix h = tensor(ComplexMatrix(0.5 * params.omega0() * op.sz_total), id_f);
    h += tensor(id_a, ComplexMatrix(params.omega() * (ad * a)));

    const double l = params.lambda();
    if (terms == CouplingTerms::Full) {
        h += l * tensor(op.collective, ComplexMatrix(ad + a));
    } else {
        h += l * (tensor(op.sp_total, a) + tensor(op.sm_total, ad));
    }
    return h;
}

ComplexMatrix excitation_number(Index n_max) {
    const auto& op = atomic_operators();
    const Index nf = basis::field_dim(n_max);
    const ComplexMatrix a = annihilation(n_max);
    const ComplexMatrix atoms = 0.5 * op.sz_total + identity(basis::pair_dim);
    return tensor(atoms, identity(nf)) +
           tensor(identity(basis::pair_dim), ComplexMatrix(a.adjoint() * a));
}

DensityMatrix initial_density(const InitialState& state) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis::pair_dim);
    const cd alpha(state.alpha(), 0.0);
    const cd beta = state.beta();
    switch (state.family()) {
        case Family::Phi:
            psi(basis::eg) = alpha;
            psi(basis::ge) = beta;
            break;
        case Family::Psi:
            psi(basis::gg) = alpha;
            psi(basis::ee) = beta;
            break;
    }
    return DensityMatrix(projector(psi), state.family() == Family::Phi ? "phi" : "psi");
}

}  // namespace qdyn
