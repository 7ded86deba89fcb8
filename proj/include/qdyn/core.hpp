// core.hpp: dense complex-matrix primitives shared by every qdyn module.
//
// All operators live in a fixed two-qubit product basis {ee, eg, ge, gg}
// (excited state first in each factor). Joint atoms+field operators use
// atoms (x) field with the photon index running fastest.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qdyn {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using cd = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using Index = Eigen::Index;

namespace basis {

inline constexpr Index excited = 0;
inline constexpr Index ground = 1;
inline constexpr Index qubit_dim = 2;

inline constexpr Index ee = 0;
inline constexpr Index eg = 1;
inline constexpr Index ge = 2;
inline constexpr Index gg = 3;
inline constexpr Index pair_dim = 4;

// Two-qubit index from single-qubit indices (qubit 1 is the slow factor).
constexpr Index pair_index(Index q1, Index q2) { return q1 * qubit_dim + q2; }

constexpr Index field_dim(Index n_max) { return n_max + 1; }

constexpr Index joint_index(Index atoms, Index photons, Index n_max) {
    return atoms * field_dim(n_max) + photons;
}

}  // namespace basis

/// Kronecker product with row-major blocks: out(i*rb + k, j*cb + l) = a(i,j) * b(k,l).
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                  "tensor: operands must share a scalar type");
    const Index rb = b.rows();
    const Index cb = b.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * rb, a.cols() * cb);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
        }
    }
    return out;
}

template <typename Derived>
auto dagger(const Eigen::MatrixBase<Derived>& a) {
    return Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>(a.adjoint());
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw std::invalid_argument("commutator: operands must be square with equal dimensions");
    }
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a * b;
    out.noalias() -= b * a;
    return out;
}

/// Reduced matrix over the factors listed in `keep` (ascending order is not required,
/// kept factors appear in their original order). `dims` lists every factor dimension.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& joint,
                   std::span<const Index> dims,
                   std::span<const std::size_t> keep) {
    using Scalar = typename Derived::Scalar;
    if (dims.empty() || keep.empty()) {
        throw std::invalid_argument("partial_trace: dims and keep must be non-empty");
    }
    const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>{});
    if (joint.rows() != total || joint.cols() != total) {
        throw std::invalid_argument("partial_trace: product of dims does not match joint dimension");
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size() || kept[k]) {
            throw std::invalid_argument("partial_trace: keep indices must be distinct factor indices");
        }
        kept[k] = true;
    }

    // Digit decomposition of a joint index into (kept, traced) sub-indices.
    std::vector<Index> kept_index(total);
    std::vector<Index> traced_index(total);
    Index kept_dim = 1;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (kept[f]) kept_dim *= dims[f];
    }
    for (Index n = 0; n < total; ++n) {
        Index rem = n;
        Index kidx = 0, kstride = 1;
        Index tidx = 0, tstride = 1;
        for (std::size_t f = dims.size(); f-- > 0;) {
            const Index digit = rem % dims[f];
            rem /= dims[f];
            if (kept[f]) {
                kidx += digit * kstride;
                kstride *= dims[f];
            } else {
                tidx += digit * tstride;
                tstride *= dims[f];
            }
        }
        kept_index[n] = kidx;
        traced_index[n] = tidx;
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kept_dim, kept_dim);
    for (Index c = 0; c < total; ++c) {
        for (Index r = 0; r < total; ++r) {
            if (traced_index[r] == traced_index[c]) {
                out(kept_index[r], kept_index[c]) += joint(r, c);
            }
        }
    }
    return out;
}

template <typename Real>
struct Diagnostics {
    std::complex<Real> trace{};
    Real hermiticity_defect{};
    Real min_eigenvalue{};
    std::vector<Real> eigenvalues;  // ascending, of (rho + rho^dagger)/2
};

template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
auto diagnose(const Eigen::MatrixBase<Derived>& rho) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Diagnostics<Real> d;
    d.trace = rho.trace();
    d.hermiticity_defect = hermiticity_defect(rho);
    const Mat sym = (rho + rho.adjoint()) * Real(0.5);
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    d.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    d.min_eigenvalue = d.eigenvalues.front();
    return d;
}

/// Square complex matrix carrying a quantum state. The validating constructor enforces
/// unit trace, Hermiticity, and positivity; `evolved` only checks shape and finiteness so
/// integrator output can be carried around and inspected.
template <typename Real>
struct DensityTolerances {
    Real hermiticity = Real(1e-10);
    Real trace = Real(1e-10);
    Real negativity = Real(1e-8);
};

template <typename Real>
class BasicDensityMatrix {
public:
    using Tolerances = DensityTolerances<Real>;

    explicit BasicDensityMatrix(CMatrix<Real> m, std::string label = {}, Tolerances tol = {})
        : m_(std::move(m)), label_(std::move(label)) {
        check_shape();
        const auto d = diagnose(m_);
        if (d.hermiticity_defect > tol.hermiticity) {
            throw std::invalid_argument("DensityMatrix: Hermiticity defect " +
                                        std::to_string(d.hermiticity_defect));
        }
        if (std::abs(d.trace - std::complex<Real>(1)) > tol.trace) {
            throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                        std::to_string(std::abs(d.trace - std::complex<Real>(1))));
        }
        if (d.min_eigenvalue < -tol.negativity) {
            throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                        std::to_string(d.min_eigenvalue));
        }
    }

    static BasicDensityMatrix evolved(CMatrix<Real> m, std::string label = {}) {
        return BasicDensityMatrix(std::move(m), std::move(label), Unchecked{});
    }

    const CMatrix<Real>& matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }
    const std::string& label() const noexcept { return label_; }
    const std::complex<Real>& operator()(Index r, Index c) const { return m_(r, c); }
    Diagnostics<Real> diagnostics() const { return diagnose(m_); }

private:
    struct Unchecked {};
    BasicDensityMatrix(CMatrix<Real> m, std::string label, Unchecked)
        : m_(std::move(m)), label_(std::move(label)) {
        check_shape();
    }

    void check_shape() const {
        if (m_.rows() < 1 || m_.rows() != m_.cols()) {
            throw std::invalid_argument("DensityMatrix: matrix must be square with dim >= 1");
        }
        if (!m_.allFinite()) {
            throw std::invalid_argument("DensityMatrix: non-finite entries");
        }
    }

    CMatrix<Real> m_;
    std::string label_;
};

using DensityMatrix = BasicDensityMatrix<double>;

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& joint,
                                       std::span<const Index> dims,
                                       std::span<const std::size_t> keep) {
    return BasicDensityMatrix<Real>::evolved(partial_trace(joint.matrix(), dims, keep),
                                             joint.label());
}

template <typename Real>
Diagnostics<Real> diagnostics(const BasicDensityMatrix<Real>& rho) {
    return rho.diagnostics();
}

/// Pure-state projector |v><v| for a column vector.
template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(v * v.adjoint());
}

}  // namespace qdyn
