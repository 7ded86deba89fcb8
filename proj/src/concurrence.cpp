#include "qdyn/concurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdyn/model.hpp"

namespace qdyn {

namespace {

constexpr double kUpperSlack = 1e-9;

void require_two_qubit(const ComplexMatrix& rho, const char* who) {
    if (rho.rows() != basis::pair_dim || rho.cols() != basis::pair_dim) {
        throw InvalidStateError(std::string(who) + ": expected a 4x4 matrix");
    }
}

double clamp_nonnegative(double x, const char* what) {
    if (x < -kNegativityClamp) {
        std::ostringstream msg;
        msg << what << " " << x << " is below -" << kNegativityClamp;
        throw InvalidStateError(msg.str());
    }
    return std::max(0.0, x);
}

ConcurrenceValue finish(double c, ConcurrenceMethod method) {
    if (c > 1.0 + kUpperSlack) {
        std::ostringstream msg;
        msg << "concurrence " << c << " exceeds 1";
        throw InvalidStateError(msg.str());
    }
    return {std::clamp(c, 0.0, 1.0), method};
}

const ComplexMatrix& spin_flip() {
    static const ComplexMatrix yy = tensor(sigma_y(), sigma_y());
    return yy;
}

}  // namespace

XStructureError::XStructureError(Index row, Index col, double magnitude)
    : std::domain_error("X structure broken: |rho(" + std::to_string(row + 1) + "," +
                        std::to_string(col + 1) + ")| = " + std::to_string(magnitude)),
      row_(row),
      col_(col),
      magnitude_(magnitude) {}

XDefect x_structure_defect(const ComplexMatrix& rho) {
    require_two_qubit(rho, "x_structure_defect");
    XDefect worst;
    for (Index r = 0; r < 4; ++r) {
        for (Index c = 0; c < 4; ++c) {
            if (r == c || r + c == 3) continue;
            const double m = std::abs(rho(r, c));
            if (m > worst.magnitude) worst = {m, r, c};
        }
    }
    return worst;
}

ConcurrenceValue concurrence_general(const ComplexMatrix& rho) {
    require_two_qubit(rho, "concurrence_general");
    const ComplexMatrix& yy = spin_flip();

    // Validity screen on the spin-flip product itself.
    const ComplexMatrix flipped = rho * yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<ComplexMatrix> product(flipped, false);
    if (product.info() != Eigen::Success) {
        throw InvalidStateError("concurrence_general: eigensolver did not converge");
    }
    for (Index i = 0; i < 4; ++i) {
        clamp_nonnegative(product.eigenvalues()(i).real(), "spin-flip eigenvalue");
    }

    // The square roots of those eigenvalues are the singular values of
    // tau = W^T (sy x sy) W for any factor rho = W W^dagger. Taking them from an
    // SVD avoids square roots of eigenvalues that sit at round-off level, which
    // would otherwise cost half the digits on rank-deficient states.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()));
    const Eigen::VectorXd p = es.eigenvalues();
    for (Index i = 0; i < 4; ++i) clamp_nonnegative(p(i), "density eigenvalue");
    const ComplexMatrix w = es.eigenvectors() * p.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const ComplexMatrix tau = w.transpose() * yy * w;
    const Eigen::VectorXd s = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();  // descending
    return finish(std::max(0.0, s(0) - s(1) - s(2) - s(3)), ConcurrenceMethod::General);
}

ConcurrenceValue concurrence_general(const DensityMatrix& rho) {
    return concurrence_general(rho.matrix());
}

ConcurrenceValue concurrence_x(const ComplexMatrix& rho, double x_tol) {
    require_two_qubit(rho, "concurrence_x");
    const XDefect defect = x_structure_defect(rho);
    if (defect.magnitude > x_tol) {
        throw XStructureError(defect.row, defect.col, defect.magnitude);
    }
    using namespace basis;
    const double p11 = clamp_nonnegative(rho(ee, ee).real(), "population rho11");
    const double p22 = clamp_nonnegative(rho(eg, eg).real(), "population rho22");
    const double p33 = clamp_nonnegative(rho(ge, ge).real(), "population rho33");
    const double p44 = clamp_nonnegative(rho(gg, gg).real(), "population rho44");
    const double odd = 2.0 * std::abs(rho(eg, ge)) - 2.0 * std::sqrt(p11 * p44);
    const double even = 2.0 * std::abs(rho(ee, gg)) - 2.0 * std::sqrt(p22 * p33);
    return finish(std::max({0.0, odd, even}), ConcurrenceMethod::XForm);
}

ConcurrenceValue concurrence_x(const DensityMatrix& rho, double x_tol) {
    return concurrence_x(rho.matrix(), x_tol);
}

}  // namespace qdyn
