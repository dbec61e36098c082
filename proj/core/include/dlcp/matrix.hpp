// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dlcp/error.hpp"

namespace dlcp {

using cplx = std::complex<double>;

/// Dense column-major matrix. std::complex<double> is laid out as an
/// interleaved (re, im) pair, so ComplexMatrix storage is bit-compatible
/// with the on-disk float64 format.
template <class T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, T fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(data_.size() == rows_ * cols_, "Matrix: data length does not match rows*cols");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }
    T& operator[](std::size_t k) noexcept { return data_[k]; }
    const T& operator[](std::size_t k) const noexcept { return data_[k]; }

    std::span<T> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const T> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    Matrix& operator+=(const Matrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, "Matrix +=: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require(rows_ == o.rows_ && cols_ == o.cols_, "Matrix -=: shape mismatch");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

// ---- dense kernels -------------------------------------------------------
// Shared by the plain solver and the differentiable replica so both produce
// bit-identical values.

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
/// aᴴ·b without forming the adjoint.
ComplexMatrix matmul_ah_b(const ComplexMatrix& a, const ComplexMatrix& b);
/// a·bᴴ without forming the adjoint.
ComplexMatrix matmul_a_bh(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
RealMatrix transpose(const RealMatrix& a);
ComplexMatrix conj(const ComplexMatrix& a);

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product; the row index of `a` varies slowest.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Column-wise Kronecker product: column r is kron(a[:,r], b[:,r]).
ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);
/// Left-to-right fold of khatri_rao over a non-empty list.
ComplexMatrix khatri_rao(std::span<const ComplexMatrix> mats);

double frob_norm_sq(const ComplexMatrix& a);
double frob_norm(const ComplexMatrix& a);

ComplexMatrix to_complex(const RealMatrix& a);
RealMatrix real_part(const ComplexMatrix& a);

/// max |a_ij - b_ij| / max(1, max |b_ij|)
double max_rel_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& a);

}  // namespace dlcp
