// SPDX-License-Identifier: Apache-2.0
#include "dlcp/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace dlcp {

namespace {

template <class T>
Matrix<T> matmul_impl(const Matrix<T>& a, const Matrix<T>& b) {
    require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
    Matrix<T> c(a.rows(), b.cols());
    const std::size_t m = a.rows();
    for (std::size_t j = 0; j < b.cols(); ++j) {
        T* cj = c.col(j).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T bkj = b(k, j);
            if (bkj == T(0)) continue;
            const T* ak = a.col(k).data();
            for (std::size_t i = 0; i < m; ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

}  // namespace

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul_impl(a, b); }
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) { return matmul_impl(a, b); }

ComplexMatrix matmul_ah_b(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows(), "matmul_ah_b: row mismatch");
    ComplexMatrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        const cplx* bj = b.col(j).data();
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const cplx* ai = a.col(i).data();
            cplx s{};
            for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(ai[k]) * bj[k];
            c(i, j) = s;
        }
    }
    return c;
}

ComplexMatrix matmul_a_bh(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.cols(), "matmul_a_bh: column mismatch");
    ComplexMatrix c(a.rows(), b.rows());
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const cplx* ak = a.col(k).data();
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const cplx bjk = std::conj(b(j, k));
            if (bjk == cplx(0)) continue;
            cplx* cj = c.col(j).data();
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bjk;
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = std::conj(a(i, j));
    return t;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

ComplexMatrix conj(const ComplexMatrix& a) {
    ComplexMatrix c = a;
    for (auto& v : c.data()) v = std::conj(v);
    return c;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard: shape mismatch");
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] * b[k];
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
            for (std::size_t ia = 0; ia < a.rows(); ++ia) {
                const cplx av = a(ia, ja);
                for (std::size_t ib = 0; ib < b.rows(); ++ib)
                    c(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
            }
    return c;
}

ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.cols(), "khatri_rao: column count mismatch");
    ComplexMatrix c(a.rows() * b.rows(), a.cols());
    for (std::size_t r = 0; r < a.cols(); ++r) {
        const cplx* ar = a.col(r).data();
        const cplx* br = b.col(r).data();
        cplx* cr = c.col(r).data();
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const cplx av = ar[i];
            for (std::size_t k = 0; k < b.rows(); ++k) cr[i * b.rows() + k] = av * br[k];
        }
    }
    return c;
}

ComplexMatrix khatri_rao(std::span<const ComplexMatrix> mats) {
    require(!mats.empty(), "khatri_rao: empty operand list");
    ComplexMatrix acc = mats.front();
    for (std::size_t i = 1; i < mats.size(); ++i) acc = khatri_rao(acc, mats[i]);
    return acc;
}

double frob_norm_sq(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return s;
}

double frob_norm(const ComplexMatrix& a) { return std::sqrt(frob_norm_sq(a)); }

ComplexMatrix to_complex(const RealMatrix& a) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k];
    return c;
}

RealMatrix real_part(const ComplexMatrix& a) {
    RealMatrix r(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k].real();
    return r;
}

double max_rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "max_rel_diff: shape mismatch");
    double diff = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        diff = std::max(diff, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(b[k]));
    }
    return diff / scale;
}

bool all_finite(const ComplexMatrix& a) {
    return std::all_of(a.data().begin(), a.data().end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

}  // namespace dlcp
