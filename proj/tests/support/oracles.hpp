// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations used only by tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dlcp/matrix.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp::testing {

using EMat = Eigen::MatrixXcd;

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    ComplexMatrix m(r, c);
    for (auto& v : m.data()) v = complex_normal(rng, 1.0);
    return m;
}

inline ComplexTensor random_tensor(const Dims& dims, Rng& rng) {
    ComplexTensor t(dims);
    for (auto& v : t.data()) v = complex_normal(rng, 1.0);
    return t;
}

inline EMat to_eigen(const ComplexMatrix& m) {
    EMat e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

inline ComplexMatrix from_eigen(const EMat& e) {
    ComplexMatrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return m;
}

/// Relative Frobenius difference ‖a − b‖/max(‖b‖, tiny).
inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return frob_norm(a - b) / std::max(frob_norm(b), 1e-300);
}

inline double rel_diff(const ComplexTensor& a, const ComplexTensor& b) {
    return frob_norm(a - b) / std::max(frob_norm(b), 1e-300);
}

/// Element lookup by direct index arithmetic, independent of matricize().
inline cplx tensor_at(const ComplexTensor& t, const std::vector<std::size_t>& idx) {
    std::size_t lin = 0, stride = 1;
    for (std::size_t n = 0; n < idx.size(); ++n) {
        lin += idx[n] * stride;
        stride *= t.dim(n);
    }
    return t[lin];
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier:
/// det(λI − A) = λⁿ + c[n−1]λⁿ⁻¹ + … + c[0].
inline std::vector<cplx> char_poly(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<cplx> c(n + 1);
    c[n] = 1.0;
    ComplexMatrix m(n, n);
    const ComplexMatrix id = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = matmul(a, m) + id * c[n - k + 1];
        const ComplexMatrix am = matmul(a, m);
        cplx tr{};
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / static_cast<double>(k);
    }
    return c;
}

/// Polynomial roots by Durand–Kerner iteration (monic coefficients, low first).
inline std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
    const std::size_t n = c.size() - 1;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) scale = std::max(scale, std::abs(c[k]));
    const double radius = 1.0 + scale;
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(radius, 0.4 + 2.0 * M_PI * static_cast<double>(k) / n);
    auto eval = [&](cplx x) {
        cplx v = c[n];
        for (std::size_t k = n; k-- > 0;) v = v * x + c[k];
        return v;
    };
    for (int it = 0; it < 5000; ++it) {
        double delta = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cplx den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) den *= z[k] - z[j];
            const cplx step = eval(z[k]) / den;
            z[k] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-15 * radius) break;
    }
    return z;
}

}  // namespace dlcp::testing
