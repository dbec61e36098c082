// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlcp/tensor.hpp"

namespace dlcp {

/// Linear MMSE denoiser for coarse channel estimates.
/// C_h = mean(h̄h̄ᴴ) − mean(σ²)·I over the training set, eigenvalues floored at
/// zero. With unitary F₁, F₂ and unit pilots the estimator C_h(C_h+σ²I)⁻¹Xᴴy
/// reduces to U·diag(λ/(λ+σ²))·Uᴴ·h̄ applied to the coarse estimate h̄.
class MmseEstimator {
public:
    /// `coarse` are training coarse estimates, `sigma2` their noise variances.
    MmseEstimator(std::span<const ComplexTensor> coarse, std::span<const double> sigma2);

    ComplexTensor estimate(const ComplexTensor& coarse, double sigma2) const;

    const Dims& dims() const noexcept { return dims_; }
    std::size_t floored_eigenvalues() const noexcept { return floored_; }
    const std::vector<double>& eigenvalues() const noexcept { return lambda_; }

private:
    Dims dims_;
    std::vector<double> lambda_;  ///< ascending
    ComplexMatrix u_;
    std::size_t floored_ = 0;
};

}  // namespace dlcp
