// concurrence.hpp: Wootters concurrence for two-qubit states.

#pragma once

#include <stdexcept>
#include <string>

#include "qdyn/core.hpp"

namespace qdyn {

enum class ConcurrenceMethod { General, XForm };

struct ConcurrenceValue {
    double value{};
    ConcurrenceMethod method{};
};

/// Input that is not a usable two-qubit state (wrong size, significantly negative
/// spin-flip eigenvalues or populations, concurrence above 1).
class InvalidStateError : public std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised by concurrence_x when an entry outside the X pattern exceeds the tolerance.
class XStructureError : public std::domain_error {
public:
    XStructureError(Index row, Index col, double magnitude);

    Index row() const noexcept { return row_; }
    Index col() const noexcept { return col_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    Index row_;
    Index col_;
    double magnitude_;
};

inline constexpr double kDefaultXTolerance = 1e-8;
inline constexpr double kNegativityClamp = 1e-6;

/// Spin-flip construction: eigenvalues of rho (sy x sy) rho* (sy x sy), sorted
/// descending, C = max(0, s1 - s2 - s3 - s4) over their square roots. The roots are
/// obtained as singular values of the Wootters tau matrix.
ConcurrenceValue concurrence_general(const ComplexMatrix& rho);
ConcurrenceValue concurrence_general(const DensityMatrix& rho);

/// Closed form for X states:
///   max{0, 2|r23| - 2 sqrt(r11 r44), 2|r14| - 2 sqrt(r22 r33)}.
ConcurrenceValue concurrence_x(const ComplexMatrix& rho, double x_tol = kDefaultXTolerance);
ConcurrenceValue concurrence_x(const DensityMatrix& rho, double x_tol = kDefaultXTolerance);

/// Largest modulus among the entries that vanish for an X state, with its position.
struct XDefect {
    double magnitude{};
    Index row{};
    Index col{};
};
XDefect x_structure_defect(const ComplexMatrix& rho);

}  // namespace qdyn
