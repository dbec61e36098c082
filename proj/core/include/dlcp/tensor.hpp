// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlcp/matrix.hpp"

namespace dlcp {

using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kMaxOrder = 8;

std::size_t num_elements(const Dims& dims);

/// Dense N-way complex array, column-major (first index fastest).
class ComplexTensor {
public:
    ComplexTensor() = default;
    explicit ComplexTensor(Dims dims);
    ComplexTensor(Dims dims, std::vector<cplx> data);

    const Dims& dims() const noexcept { return dims_; }
    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t dim(std::size_t n) const { return dims_.at(n); }
    std::size_t size() const noexcept { return data_.size(); }

    std::vector<cplx>& data() noexcept { return data_; }
    const std::vector<cplx>& data() const noexcept { return data_; }
    cplx& operator[](std::size_t k) noexcept { return data_[k]; }
    const cplx& operator[](std::size_t k) const noexcept { return data_[k]; }

    cplx& at(std::span<const std::size_t> idx);
    const cplx& at(std::span<const std::size_t> idx) const;

    ComplexTensor& operator+=(const ComplexTensor& o);
    ComplexTensor& operator-=(const ComplexTensor& o);
    ComplexTensor& operator*=(cplx s);
    friend ComplexTensor operator+(ComplexTensor a, const ComplexTensor& b) { return a += b; }
    friend ComplexTensor operator-(ComplexTensor a, const ComplexTensor& b) { return a -= b; }
    friend ComplexTensor operator*(ComplexTensor a, cplx s) { return a *= s; }

    bool operator==(const ComplexTensor&) const = default;

private:
    std::size_t linear_index(std::span<const std::size_t> idx) const;

    Dims dims_;
    std::vector<cplx> data_;
};

/// Mode-n unfolding (0-based mode). Column index follows the Kolda ordering:
/// remaining modes in ascending order, lowest mode fastest.
ComplexMatrix matricize(const ComplexTensor& t, std::size_t mode);

/// Inverse of matricize for a tensor of shape `dims`.
ComplexTensor fold(const ComplexMatrix& m, std::size_t mode, const Dims& dims);

/// t ×_n m : replaces I_n with rows(m).
ComplexTensor mode_n_product(const ComplexTensor& t, const ComplexMatrix& m, std::size_t mode);

/// a_1 ∘ a_2 ∘ … ∘ a_N
ComplexTensor outer(std::span<const std::vector<cplx>> vectors);

double frob_norm_sq(const ComplexTensor& t);
double frob_norm(const ComplexTensor& t);

/// Reorders modes: output mode k is input mode perm[k].
ComplexTensor permute_modes(const ComplexTensor& t, std::span<const std::size_t> perm);

bool all_finite(const ComplexTensor& t);

}  // namespace dlcp
