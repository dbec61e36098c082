// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "dlcp/matrix.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

/// ⟦α; A_1, …, A_N⟧. Solver-facing factors keep α = 1 (weights absorbed).
struct CpFactors {
    std::vector<cplx> weights;
    std::vector<ComplexMatrix> factors;

    CpFactors() = default;
    CpFactors(std::vector<cplx> w, std::vector<ComplexMatrix> f);
    /// All-ones weights.
    explicit CpFactors(std::vector<ComplexMatrix> f);

    std::size_t rank() const noexcept { return weights.size(); }
    std::size_t order() const noexcept { return factors.size(); }
    Dims dims() const;
    bool has_unit_weights() const;
    /// Throws ValidationError unless every factor has rank() columns.
    void validate() const;
};

/// Σ_r α_r a_{1,r} ∘ … ∘ a_{N,r}, accumulated elementwise.
ComplexTensor reconstruct(const CpFactors& f);

/// A_n·diag(α)·(A_N ⋄ … ⋄ A_{n+1} ⋄ A_{n-1} ⋄ … ⋄ A_1)ᵀ, the mode-n unfolding
/// of reconstruct(f).
ComplexMatrix reconstruct_unfolded(const CpFactors& f, std::size_t mode);

/// Khatri-Rao product of all factors except `mode`, highest mode first, so
/// that X_(n) = A_n·diag(α)·khatri_rao_except(f, n)ᵀ under matricize().
ComplexMatrix khatri_rao_except(std::span<const ComplexMatrix> factors, std::size_t mode);

struct NormalizeResult {
    CpFactors factors;
    std::vector<std::size_t> zero_columns;  ///< components with a zero column in some mode
};

/// Unit-norm columns in every mode with α and the residual magnitude/phase
/// pushed into mode 1; weights become all-ones. Components containing a zero
/// column are left as-is with zero weight and reported.
NormalizeResult normalize(const CpFactors& f);

/// [A]_{i,r} = exp(-j·i·z_r), i = 0..length-1.
ComplexMatrix vandermonde(std::span<const double> z, std::size_t length);

/// Exact Kruskal rank by subset enumeration (cols ≤ 6). A subset counts as
/// independent when σ_min > 1e-9·σ_max.
std::size_t kruskal_rank(const ComplexMatrix& a);

struct UniquenessResult {
    bool unique = false;
    long slack = 0;  ///< Σ krank − (2R + N − 1)
    std::vector<std::size_t> kranks;
};

/// Sufficient CP uniqueness check Σ_n krank(A_n) ≥ 2R + N − 1.
UniquenessResult uniqueness_check(const CpFactors& f);

struct Alignment {
    CpFactors aligned;
    std::vector<std::size_t> permutation;  ///< aligned column r is est column permutation[r]
    double distance_before = 0.0;
    double distance_after = 0.0;
};

/// Frobenius distance between unit-normalized columns, summed over modes.
double factor_distance(const CpFactors& a, const CpFactors& b);

/// Column permutation plus per-column unit-modulus rotation (per mode)
/// minimizing factor_distance to `truth`; exhaustive over R! (R ≤ 6).
/// Intended for metrics only.
Alignment align_to_truth(const CpFactors& est, const CpFactors& truth);

}  // namespace dlcp
