// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "dlcp/als.hpp"
#include "dlcp/autodiff.hpp"
#include "dlcp/mlp.hpp"

namespace dlcp {

struct UnrolledGraph {
    ad::RVar loss;                     ///< ‖Y − ⟦1; A⟧‖²_F after the last update
    std::vector<ad::CVar> factors;     ///< A_1..A_N after K sweeps
    std::size_t regularized_solves = 0;
};

/// Records the mode-1 update plus K full sweeps on the tape. `init` holds
/// A_2..A_N. Forward values are bit-identical to cpals().
UnrolledGraph record_cpals(ad::Tape& t, const Unfoldings& y, const std::vector<ad::CVar>& init, std::size_t k);

struct LossGrad {
    double loss = 0.0;
    std::vector<RealMatrix> grad_w, grad_b;  ///< empty unless requested
    std::size_t regularized_solves = 0;
};

/// Unrolled loss of one sample: network(y) → A_2..A_N → CPALS with K
/// sweeps → ‖y − ⟦1; Â⟧‖²_F. Empty `masks` disables dropout.
/// Throws NumericalError on a non-finite loss.
LossGrad unrolled_loss(const MlpModel& model, const ComplexTensor& y, std::size_t k,
                       const std::vector<RealMatrix>& masks, bool with_grad);

/// Commutation matrix K_{m,n}: K·vec(A) = vec(Aᵀ) for A of shape m×n.
ComplexMatrix commutation_matrix(std::size_t m, std::size_t n);

/// Closed-form Jacobian ∂vec(A_1)/∂vec(A_2) of the K = 0 step for a 3-way
/// tensor, with A_3 constant and A_2* held fixed:
///   (I_R ⊗ M)·(−Γ⁻ᵀ ⊗ Γ⁻¹)·diag(vec(A_3ᵀA_3*))·(A_2ᴴ ⊗ I_R)·K_{I_2,R},
/// where M = Y_(1)·(A_3 ⋄ A_2)* and Γ = (A_3ᵀA_3*) ⊙ (A_2ᵀA_2*).
/// Shape (I_1·R) × (I_2·R). Throws NumericalError on a singular Γ.
ComplexMatrix analytic_grad_step0(const ComplexTensor& y, const ComplexMatrix& a2, const ComplexMatrix& a3);

}  // namespace dlcp
