// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dlcp/matrix.hpp"

namespace dlcp {

struct SolveResult {
    ComplexMatrix x;
    bool regularized = false;  ///< Tikhonov fallback was used
    double epsilon = 0.0;      ///< ridge added to the diagonal when regularized
};

/// Solves g·X = rhs for Hermitian g by Cholesky. If g is not numerically
/// positive definite, retries with g + εI, ε = 1e-12·trace(g)/R, and flags it.
/// Throws ValidationError when g is not square / Hermitian to 1e-10 or when
/// the row counts disagree; NumericalError when even the ridge fails.
SolveResult hermitian_solve(const ComplexMatrix& g, const ComplexMatrix& rhs);

/// X·g = rhs for Hermitian g, i.e. rhs·g⁻¹. Same fallback policy.
SolveResult hermitian_solve_right(const ComplexMatrix& rhs, const ComplexMatrix& g);

struct HermitianEigen {
    std::vector<double> values;  ///< descending
    ComplexMatrix vectors;       ///< column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix, iterated until the
/// off-diagonal Frobenius mass drops below 1e-12·‖a‖_F.
HermitianEigen jacobi_eigh(const ComplexMatrix& a);

/// Singular values (descending) by one-sided Hestenes-Jacobi; accurate for
/// tiny singular values, which the Gram route is not.
std::vector<double> singular_values(const ComplexMatrix& a);

struct LeadingEigvecs {
    ComplexMatrix vectors;       ///< rows(m) × R, orthonormal columns
    std::vector<double> values;  ///< R leading eigenvalues of m·mᴴ
    bool degenerate = false;     ///< λ_R ≤ 1e-12·λ_1 (basis is arbitrary past that point)
};

/// Top-R eigenvectors of m·mᴴ in descending eigenvalue order; each column is
/// rotated so that its first entry of non-negligible magnitude is real-positive.
LeadingEigvecs leading_eigvecs(const ComplexMatrix& m, std::size_t r);

/// Multiplies each column by a unit-modulus scalar so that its first
/// entry with |v| > 1e-10·max|v| is real and positive.
void fix_column_phases(ComplexMatrix& v);

}  // namespace dlcp
