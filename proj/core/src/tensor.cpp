// SPDX-License-Identifier: Apache-2.0
#include "dlcp/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dlcp {

namespace {

void check_dims(const Dims& dims) {
    require(!dims.empty(), "tensor: order must be >= 1");
    require(dims.size() <= kMaxOrder, "tensor: order > 8 is not supported");
    for (auto d : dims) require(d >= 1, "tensor: every dimension must be >= 1");
}

}  // namespace

std::size_t num_elements(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ComplexTensor::ComplexTensor(Dims dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.assign(num_elements(dims_), cplx{});
}

ComplexTensor::ComplexTensor(Dims dims, std::vector<cplx> data) : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    require(data_.size() == num_elements(dims_), "tensor: data length does not match dims");
}

std::size_t ComplexTensor::linear_index(std::span<const std::size_t> idx) const {
    require(idx.size() == dims_.size(), "tensor: index arity mismatch");
    std::size_t k = 0, stride = 1;
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        require(idx[n] < dims_[n], "tensor: index out of range");
        k += idx[n] * stride;
        stride *= dims_[n];
    }
    return k;
}

cplx& ComplexTensor::at(std::span<const std::size_t> idx) { return data_[linear_index(idx)]; }
const cplx& ComplexTensor::at(std::span<const std::size_t> idx) const { return data_[linear_index(idx)]; }

ComplexTensor& ComplexTensor::operator+=(const ComplexTensor& o) {
    require(dims_ == o.dims_, "tensor +=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

ComplexTensor& ComplexTensor::operator-=(const ComplexTensor& o) {
    require(dims_ == o.dims_, "tensor -=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

ComplexTensor& ComplexTensor::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

// With the tensor viewed as (left, I_n, right) where left = prod of modes
// before n and right = prod after, the Kolda column index is l + left*r.
ComplexMatrix matricize(const ComplexTensor& t, std::size_t mode) {
    require(mode < t.order(), "matricize: mode " + std::to_string(mode) + " out of range");
    const auto& d = t.dims();
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < mode; ++k) left *= d[k];
    for (std::size_t k = mode + 1; k < d.size(); ++k) right *= d[k];
    const std::size_t in = d[mode];
    ComplexMatrix m(in, left * right);
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t i = 0; i < in; ++i) {
            const cplx* src = t.data().data() + left * (i + in * r);
            for (std::size_t l = 0; l < left; ++l) m(i, l + left * r) = src[l];
        }
    return m;
}

ComplexTensor fold(const ComplexMatrix& m, std::size_t mode, const Dims& dims) {
    require(mode < dims.size(), "fold: mode out of range");
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < mode; ++k) left *= dims[k];
    for (std::size_t k = mode + 1; k < dims.size(); ++k) right *= dims[k];
    const std::size_t in = dims[mode];
    require(m.rows() == in && m.cols() == left * right, "fold: matrix shape does not match dims");
    ComplexTensor t(dims);
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t i = 0; i < in; ++i) {
            cplx* dst = t.data().data() + left * (i + in * r);
            for (std::size_t l = 0; l < left; ++l) dst[l] = m(i, l + left * r);
        }
    return t;
}

ComplexTensor mode_n_product(const ComplexTensor& t, const ComplexMatrix& m, std::size_t mode) {
    require(mode < t.order(), "mode_n_product: mode out of range");
    require(m.cols() == t.dim(mode), "mode_n_product: cols(m) must equal I_n");
    Dims out_dims = t.dims();
    out_dims[mode] = m.rows();
    return fold(matmul(m, matricize(t, mode)), mode, out_dims);
}

ComplexTensor outer(std::span<const std::vector<cplx>> vectors) {
    require(!vectors.empty(), "outer: need at least one vector");
    Dims dims;
    for (const auto& v : vectors) dims.push_back(v.size());
    ComplexTensor t(dims);
    std::vector<std::size_t> idx(dims.size(), 0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        cplx v{1.0, 0.0};
        for (std::size_t n = 0; n < dims.size(); ++n) v *= vectors[n][idx[n]];
        t[k] = v;
        for (std::size_t n = 0; n < dims.size(); ++n) {
            if (++idx[n] < dims[n]) break;
            idx[n] = 0;
        }
    }
    return t;
}

double frob_norm_sq(const ComplexTensor& t) {
    double s = 0.0;
    for (const auto& v : t.data()) s += std::norm(v);
    return s;
}

double frob_norm(const ComplexTensor& t) { return std::sqrt(frob_norm_sq(t)); }

ComplexTensor permute_modes(const ComplexTensor& t, std::span<const std::size_t> perm) {
    const std::size_t n = t.order();
    require(perm.size() == n, "permute_modes: permutation arity mismatch");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        require(p < n && !seen[p], "permute_modes: not a permutation");
        seen[p] = true;
    }
    Dims out_dims(n);
    for (std::size_t k = 0; k < n; ++k) out_dims[k] = t.dim(perm[k]);
    std::vector<std::size_t> in_stride(n, 1);
    for (std::size_t k = 1; k < n; ++k) in_stride[k] = in_stride[k - 1] * t.dim(k - 1);
    ComplexTensor out(out_dims);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::size_t src = 0;
        for (std::size_t m = 0; m < n; ++m) src += idx[m] * in_stride[perm[m]];
        out[k] = t[src];
        for (std::size_t m = 0; m < n; ++m) {
            if (++idx[m] < out_dims[m]) break;
            idx[m] = 0;
        }
    }
    return out;
}

bool all_finite(const ComplexTensor& t) {
    return std::all_of(t.data().begin(), t.data().end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

}  // namespace dlcp
