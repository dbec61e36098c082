// SPDX-License-Identifier: Apache-2.0
#include "dlcp/cp_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dlcp/linalg.hpp"

namespace dlcp {

CpFactors::CpFactors(std::vector<cplx> w, std::vector<ComplexMatrix> f) : weights(std::move(w)), factors(std::move(f)) {
    validate();
}

CpFactors::CpFactors(std::vector<ComplexMatrix> f) : factors(std::move(f)) {
    require(!factors.empty(), "CpFactors: need at least one factor");
    weights.assign(factors.front().cols(), cplx{1.0, 0.0});
    validate();
}

Dims CpFactors::dims() const {
    Dims d;
    for (const auto& a : factors) d.push_back(a.rows());
    return d;
}

bool CpFactors::has_unit_weights() const {
    return std::all_of(weights.begin(), weights.end(), [](const cplx& w) { return w == cplx{1.0, 0.0}; });
}

void CpFactors::validate() const {
    require(!factors.empty(), "CpFactors: need at least one factor");
    require(!weights.empty(), "CpFactors: rank must be >= 1");
    for (std::size_t n = 0; n < factors.size(); ++n)
        require(factors[n].cols() == weights.size() && factors[n].rows() >= 1,
                "CpFactors: factor " + std::to_string(n) + " does not have R columns");
}

ComplexTensor reconstruct(const CpFactors& f) {
    f.validate();
    const Dims dims = f.dims();
    ComplexTensor t(dims);
    const std::size_t n_modes = dims.size();
    std::vector<std::size_t> idx(n_modes, 0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        cplx acc{};
        for (std::size_t r = 0; r < f.rank(); ++r) {
            cplx v = f.weights[r];
            for (std::size_t n = 0; n < n_modes; ++n) v *= f.factors[n](idx[n], r);
            acc += v;
        }
        t[k] = acc;
        for (std::size_t n = 0; n < n_modes; ++n) {
            if (++idx[n] < dims[n]) break;
            idx[n] = 0;
        }
    }
    return t;
}

ComplexMatrix khatri_rao_except(std::span<const ComplexMatrix> factors, std::size_t mode) {
    require(mode < factors.size(), "khatri_rao_except: mode out of range");
    std::vector<ComplexMatrix> ops;
    for (std::size_t n = factors.size(); n-- > 0;)
        if (n != mode) ops.push_back(factors[n]);
    if (ops.empty()) return ComplexMatrix(1, factors[mode].cols(), cplx{1.0, 0.0});
    return khatri_rao(std::span<const ComplexMatrix>(ops));
}

ComplexMatrix reconstruct_unfolded(const CpFactors& f, std::size_t mode) {
    f.validate();
    ComplexMatrix scaled = f.factors.at(mode);
    for (std::size_t r = 0; r < f.rank(); ++r)
        for (auto& v : scaled.col(r)) v *= f.weights[r];
    return matmul(scaled, transpose(khatri_rao_except(f.factors, mode)));
}

NormalizeResult normalize(const CpFactors& f) {
    f.validate();
    NormalizeResult out{f, {}};
    CpFactors& g = out.factors;
    for (std::size_t r = 0; r < f.rank(); ++r) {
        bool zero = false;
        for (const auto& a : f.factors) {
            double s = 0.0;
            for (const auto& v : a.col(r)) s += std::norm(v);
            if (s == 0.0) zero = true;
        }
        if (zero || f.weights[r] == cplx{}) {
            out.zero_columns.push_back(r);
            g.weights[r] = 0.0;
            continue;
        }
        cplx carry = f.weights[r];
        for (std::size_t n = 1; n < f.order(); ++n) {
            auto col = g.factors[n].col(r);
            double s = 0.0;
            for (const auto& v : col) s += std::norm(v);
            const double nrm = std::sqrt(s);
            for (auto& v : col) v /= nrm;
            carry *= nrm;
        }
        for (auto& v : g.factors[0].col(r)) v *= carry;
        g.weights[r] = 1.0;
    }
    return out;
}

ComplexMatrix vandermonde(std::span<const double> z, std::size_t length) {
    require(length >= 1, "vandermonde: length must be >= 1");
    ComplexMatrix a(length, z.size());
    for (std::size_t r = 0; r < z.size(); ++r)
        for (std::size_t i = 0; i < length; ++i)
            a(i, r) = std::polar(1.0, -static_cast<double>(i) * z[r]);
    return a;
}

std::size_t kruskal_rank(const ComplexMatrix& a) {
    const std::size_t r = a.cols();
    require(r <= 6, "kruskal_rank: exact enumeration supports at most 6 columns");
    auto independent = [&](const std::vector<std::size_t>& cols) {
        ComplexMatrix sub(a.rows(), cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k)
            std::copy(a.col(cols[k]).begin(), a.col(cols[k]).end(), sub.col(k).begin());
        if (cols.size() > a.rows()) return false;
        const auto sv = singular_values(sub);
        return sv.front() > 0.0 && sv.back() > 1e-9 * sv.front();
    };
    std::size_t krank = 0;
    for (std::size_t k = 1; k <= r; ++k) {
        // enumerate all k-subsets via a selection mask
        std::vector<bool> mask(r, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
        bool all_ok = true;
        do {
            std::vector<std::size_t> cols;
            for (std::size_t i = 0; i < r; ++i)
                if (mask[i]) cols.push_back(i);
            if (!independent(cols)) {
                all_ok = false;
                break;
            }
        } while (std::prev_permutation(mask.begin(), mask.end()));
        if (!all_ok) break;
        krank = k;
    }
    return krank;
}

UniquenessResult uniqueness_check(const CpFactors& f) {
    f.validate();
    UniquenessResult out;
    long total = 0;
    for (const auto& a : f.factors) {
        out.kranks.push_back(kruskal_rank(a));
        total += static_cast<long>(out.kranks.back());
    }
    out.slack = total - static_cast<long>(2 * f.rank() + f.order() - 1);
    out.unique = out.slack >= 0;
    return out;
}

namespace {

std::vector<cplx> unit_column(const ComplexMatrix& a, std::size_t r) {
    std::vector<cplx> v(a.col(r).begin(), a.col(r).end());
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    if (s > 0.0)
        for (auto& x : v) x /= std::sqrt(s);
    return v;
}

double column_dist_sq(const std::vector<cplx>& a, const std::vector<cplx>& b, cplx rot) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] * rot - b[i]);
    return s;
}

cplx best_rotation(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx ip{};
    for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
    const double m = std::abs(ip);
    return m > 0.0 ? ip / m : cplx{1.0, 0.0};
}

}  // namespace

double factor_distance(const CpFactors& a, const CpFactors& b) {
    require(a.rank() == b.rank() && a.dims() == b.dims(), "factor_distance: shape or rank mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < a.order(); ++n)
        for (std::size_t r = 0; r < a.rank(); ++r)
            s += column_dist_sq(unit_column(a.factors[n], r), unit_column(b.factors[n], r), 1.0);
    return std::sqrt(s);
}

Alignment align_to_truth(const CpFactors& est, const CpFactors& truth) {
    require(est.rank() == truth.rank(), "align_to_truth: rank mismatch");
    require(est.dims() == truth.dims(), "align_to_truth: shape mismatch");
    const std::size_t rank = est.rank();
    require(rank <= 6, "align_to_truth: exhaustive search supports R <= 6");
    const std::size_t modes = est.order();

    // cost[i][j]: best distance² of est column i against truth column j
    std::vector<std::vector<double>> cost(rank, std::vector<double>(rank, 0.0));
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j)
            for (std::size_t n = 0; n < modes; ++n) {
                const auto u = unit_column(est.factors[n], i);
                const auto v = unit_column(truth.factors[n], j);
                cost[i][j] += column_dist_sq(u, v, best_rotation(u, v));
            }

    std::vector<std::size_t> perm(rank), best(rank);
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (std::size_t j = 0; j < rank; ++j) c += cost[perm[j]][j];
        if (c < best_cost) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Alignment out;
    out.permutation = best;
    out.distance_before = factor_distance(est, truth);
    std::vector<ComplexMatrix> factors;
    std::vector<cplx> weights(rank);
    for (std::size_t n = 0; n < modes; ++n) factors.emplace_back(est.factors[n].rows(), rank);
    for (std::size_t j = 0; j < rank; ++j) {
        const std::size_t i = best[j];
        cplx total_rot{1.0, 0.0};
        for (std::size_t n = 0; n < modes; ++n) {
            const cplx rot = best_rotation(unit_column(est.factors[n], i), unit_column(truth.factors[n], j));
            total_rot *= rot;
            for (std::size_t k = 0; k < est.factors[n].rows(); ++k) factors[n](k, j) = est.factors[n](k, i) * rot;
        }
        weights[j] = est.weights[i] * std::conj(total_rot);
    }
    out.aligned = CpFactors(std::move(weights), std::move(factors));
    out.distance_after = factor_distance(out.aligned, truth);
    return out;
}

}  // namespace dlcp
