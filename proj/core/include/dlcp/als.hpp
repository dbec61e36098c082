// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dlcp/cp_model.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

enum class SolveMode {
    Inverse,                ///< Gram product must be numerically PD; otherwise NumericalError
    PseudoinverseFallback,  ///< flagged Tikhonov fallback on a singular Gram product
};

struct AlsConfig {
    std::size_t rank = 1;
    std::size_t iterations = 0;  ///< K, number of full sweeps after the initial mode-1 update
    SolveMode solve_mode = SolveMode::PseudoinverseFallback;
    bool record_trace = true;
};

/// objective[k] is ‖Y − ⟦1; A⟧‖²_F after sweep k; index 0 is the state right
/// after the initial mode-1 update.
struct AlsTrace {
    std::vector<double> objective;
    std::vector<double> nse;  ///< filled only when a truth tensor is supplied
    std::size_t regularized_solves = 0;
};

struct AlsResult {
    CpFactors factors;
    AlsTrace trace;
};

/// Precomputed mode-n unfoldings of the data tensor.
class Unfoldings {
public:
    explicit Unfoldings(const ComplexTensor& y);
    const ComplexMatrix& operator[](std::size_t n) const { return mats_.at(n); }
    std::size_t order() const noexcept { return mats_.size(); }
    const Dims& dims() const noexcept { return dims_; }

private:
    Dims dims_;
    std::vector<ComplexMatrix> mats_;
};

/// Γ_n = ⊙_{l≠n} A_lᵀ·A_l* (Hadamard over ascending l).
ComplexMatrix gram_product_except(std::span<const ComplexMatrix> factors, std::size_t mode);

struct StepResult {
    ComplexMatrix factor;
    bool regularized = false;
};

/// Exact least-squares update of mode `mode`:
///   Y_(n)·(⋄_{l≠n} A_l*)·Γ_n⁻¹
StepResult als_step(const ComplexMatrix& y_unfolded, std::span<const ComplexMatrix> factors, std::size_t mode,
                    SolveMode solve_mode = SolveMode::PseudoinverseFallback);
ComplexMatrix als_step(const ComplexTensor& y, const CpFactors& f, std::size_t mode);

/// CPALS: initial mode-1 update from `init` (modes 2..N), then K sweeps over
/// modes 1..N in order. Throws NumericalError on non-finite values, naming the
/// sweep and mode.
AlsResult cpals(const ComplexTensor& y, std::span<const ComplexMatrix> init, const AlsConfig& cfg,
                const ComplexTensor* truth = nullptr);

/// ‖y − ⟦1; A⟧‖²_F
double objective(const ComplexTensor& y, const CpFactors& f);
/// ‖est − truth‖²_F / ‖truth‖²_F; ValidationError on zero truth.
double nse(const ComplexTensor& est, const ComplexTensor& truth);
double anse(std::span<const double> nse_values);

}  // namespace dlcp
