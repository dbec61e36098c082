// SPDX-License-Identifier: Apache-2.0
#include "dlcp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace dlcp {

namespace {

constexpr double kAsymmetryTol = 1e-10;
constexpr double kPivotTol = 1e-14;

void check_hermitian(const ComplexMatrix& g) {
    require(g.rows() == g.cols(), "hermitian_solve: g must be square");
    double scale = 0.0;
    for (const auto& v : g.data()) scale = std::max(scale, std::abs(v));
    const double tol = kAsymmetryTol * std::max(1.0, scale);
    for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t i = j; i < g.rows(); ++i)
            if (std::abs(g(i, j) - std::conj(g(j, i))) > tol)
                fail_validation("hermitian_solve: g is not Hermitian within 1e-10");
}

// Lower Cholesky factor, or nullopt when a pivot is non-positive relative to
// the largest diagonal entry.
std::optional<ComplexMatrix> cholesky(const ComplexMatrix& g, double shift) {
    const std::size_t n = g.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i).real() + shift);
    ComplexMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = g(j, j).real() + shift;
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > kPivotTol * max_diag) || !std::isfinite(d)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

ComplexMatrix cholesky_solve(const ComplexMatrix& l, ComplexMatrix b) {
    const std::size_t n = l.rows();
    for (std::size_t c = 0; c < b.cols(); ++c) {
        cplx* x = b.col(c).data();
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x[i];
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
            x[i] = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = x[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x[k];
            x[ii] = s / l(ii, ii);
        }
    }
    return b;
}

}  // namespace

SolveResult hermitian_solve(const ComplexMatrix& g, const ComplexMatrix& rhs) {
    check_hermitian(g);
    require(rhs.rows() == g.rows(), "hermitian_solve: rhs row count must equal size of g");
    SolveResult out;
    auto l = cholesky(g, 0.0);
    if (!l) {
        double trace = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i) trace += g(i, i).real();
        double eps = 1e-12 * trace / static_cast<double>(g.rows());
        if (!(eps > 0.0)) eps = 1e-12;
        l = cholesky(g, eps);
        if (!l) throw NumericalError("hermitian_solve: regularized factorization failed");
        out.regularized = true;
        out.epsilon = eps;
    }
    out.x = cholesky_solve(*l, rhs);
    return out;
}

SolveResult hermitian_solve_right(const ComplexMatrix& rhs, const ComplexMatrix& g) {
    require(rhs.cols() == g.rows(), "hermitian_solve_right: rhs column count must equal size of g");
    // X g = B  <=>  g Xᴴ = Bᴴ  (g Hermitian)
    SolveResult r = hermitian_solve(g, adjoint(rhs));
    r.x = adjoint(r.x);
    return r;
}

HermitianEigen jacobi_eigh(const ComplexMatrix& input) {
    require(input.rows() == input.cols(), "jacobi_eigh: matrix must be square");
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double total = frob_norm(a);
    const double tol = 1e-12 * std::max(total, 1e-300);

    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    HermitianEigen out;
    for (int sweep = 0; sweep < 100 && off_mass() > tol; ++sweep) {
        out.sweeps = sweep + 1;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const cplx phase = apq / mag;  // e^{iφ}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G restricted to (p,q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
                const cplx gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
                for (std::size_t i = 0; i < n; ++i) {  // a <- a G
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * gpp + aiq * gqp;
                    a(i, q) = aip * gpq + aiq * gqq;
                }
                for (std::size_t j = 0; j < n; ++j) {  // a <- Gᴴ a
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
                    a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t i = 0; i < n; ++i) {  // v <- v G
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> singular_values(const ComplexMatrix& input) {
    ComplexMatrix a = input;
    const std::size_t n = a.cols(), m = a.rows();
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cplx gamma{};
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += std::norm(a(i, p));
                    beta += std::norm(a(i, q));
                    gamma += std::conj(a(i, p)) * a(i, q);
                }
                const double g = std::abs(gamma);
                if (g <= 1e-15 * std::sqrt(alpha * beta) || g < 1e-300) continue;
                rotated = true;
                const cplx phase = std::conj(gamma) / g;  // b_q = a_q·e^{-iφ}
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx ap = a(i, p), bq = a(i, q) * phase;
                    a(i, p) = c * ap - s * bq;
                    a(i, q) = s * ap + c * bq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

void fix_column_phases(ComplexMatrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        auto col = v.col(j);
        double peak = 0.0;
        for (const auto& x : col) peak = std::max(peak, std::abs(x));
        if (peak == 0.0) continue;
        for (const auto& x : col) {
            const double mag = std::abs(x);
            if (mag > 1e-10 * peak) {
                const cplx rot = std::conj(x) / mag;
                for (auto& y : col) y *= rot;
                break;
            }
        }
    }
}

LeadingEigvecs leading_eigvecs(const ComplexMatrix& m, std::size_t r) {
    require(r >= 1 && r <= m.rows(),
            "leading_eigvecs: R=" + std::to_string(r) + " exceeds rows=" + std::to_string(m.rows()));
    const HermitianEigen eig = jacobi_eigh(matmul_a_bh(m, m));
    LeadingEigvecs out;
    out.vectors = ComplexMatrix(m.rows(), r);
    out.values.assign(eig.values.begin(), eig.values.begin() + static_cast<std::ptrdiff_t>(r));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < m.rows(); ++i) out.vectors(i, k) = eig.vectors(i, k);
    fix_column_phases(out.vectors);
    const double top = out.values.front();
    out.degenerate = !(top > 0.0) || out.values.back() <= 1e-12 * top;
    return out;
}

}  // namespace dlcp
