// SPDX-License-Identifier: Apache-2.0
#include "dlcp/als.hpp"

#include <numeric>
#include <string>

#include "dlcp/linalg.hpp"

namespace dlcp {

Unfoldings::Unfoldings(const ComplexTensor& y) : dims_(y.dims()) {
    for (std::size_t n = 0; n < y.order(); ++n) mats_.push_back(matricize(y, n));
}

ComplexMatrix gram_product_except(std::span<const ComplexMatrix> factors, std::size_t mode) {
    require(mode < factors.size(), "gram_product_except: mode out of range");
    const std::size_t r = factors[mode].cols();
    ComplexMatrix acc(r, r, cplx{1.0, 0.0});
    for (std::size_t l = 0; l < factors.size(); ++l) {
        if (l == mode) continue;
        acc = hadamard(acc, conj(matmul_ah_b(factors[l], factors[l])));
    }
    return acc;
}

StepResult als_step(const ComplexMatrix& y_unfolded, std::span<const ComplexMatrix> factors, std::size_t mode,
                    SolveMode solve_mode) {
    require(mode < factors.size(), "als_step: mode out of range");
    const std::size_t r = factors[mode].cols();
    for (const auto& a : factors) require(a.cols() == r, "als_step: factors disagree on rank");
    require(y_unfolded.rows() == factors[mode].rows(), "als_step: unfolding rows do not match I_n");

    const ComplexMatrix kr = khatri_rao_except(factors, mode);
    require(kr.rows() == y_unfolded.cols(), "als_step: unfolding columns do not match other modes");
    const ComplexMatrix m = matmul(y_unfolded, conj(kr));
    const ComplexMatrix gram = gram_product_except(factors, mode);
    SolveResult s = hermitian_solve_right(m, gram);
    if (s.regularized && solve_mode == SolveMode::Inverse)
        throw NumericalError("als_step: Gram product is singular (mode " + std::to_string(mode + 1) + ")");
    return {std::move(s.x), s.regularized};
}

ComplexMatrix als_step(const ComplexTensor& y, const CpFactors& f, std::size_t mode) {
    require(f.has_unit_weights(), "als_step: factors must be normalized (all-ones weights)");
    require(f.dims() == y.dims(), "als_step: factor shapes do not match the tensor");
    return als_step(matricize(y, mode), f.factors, mode).factor;
}

double objective(const ComplexTensor& y, const CpFactors& f) {
    require(f.dims() == y.dims(), "objective: shape mismatch");
    return frob_norm_sq(y - reconstruct(f));
}

double nse(const ComplexTensor& est, const ComplexTensor& truth) {
    require(est.dims() == truth.dims(), "nse: shape mismatch");
    const double denom = frob_norm_sq(truth);
    require(denom > 0.0, "nse: truth tensor has zero norm");
    return frob_norm_sq(est - truth) / denom;
}

double anse(std::span<const double> nse_values) {
    require(!nse_values.empty(), "anse: empty sample set");
    return std::accumulate(nse_values.begin(), nse_values.end(), 0.0) / static_cast<double>(nse_values.size());
}

AlsResult cpals(const ComplexTensor& y, std::span<const ComplexMatrix> init, const AlsConfig& cfg,
                const ComplexTensor* truth) {
    const std::size_t order = y.order();
    require(cfg.rank >= 1, "cpals: rank must be >= 1");
    require(order >= 2, "cpals: tensor order must be >= 2");
    require(init.size() == order - 1, "cpals: init must supply factors for modes 2..N");
    for (std::size_t n = 1; n < order; ++n)
        require(init[n - 1].rows() == y.dim(n) && init[n - 1].cols() == cfg.rank,
                "cpals: init factor for mode " + std::to_string(n + 1) + " has the wrong shape");
    if (truth) require(truth->dims() == y.dims(), "cpals: truth tensor shape mismatch");

    const Unfoldings unf(y);
    std::vector<ComplexMatrix> factors;
    factors.emplace_back(y.dim(0), cfg.rank);
    for (const auto& a : init) factors.push_back(a);

    AlsResult out;
    auto record = [&] {
        if (!cfg.record_trace) return;
        CpFactors f(factors);
        const ComplexTensor rec = reconstruct(f);
        out.trace.objective.push_back(frob_norm_sq(y - rec));
        if (truth) out.trace.nse.push_back(nse(rec, *truth));
    };
    auto update = [&](std::size_t mode, std::size_t sweep) {
        StepResult s = als_step(unf[mode], factors, mode, cfg.solve_mode);
        if (!all_finite(s.factor))
            throw NumericalError("cpals: non-finite factor at iteration " + std::to_string(sweep) + ", mode " +
                                 std::to_string(mode + 1));
        if (s.regularized) ++out.trace.regularized_solves;
        factors[mode] = std::move(s.factor);
    };

    update(0, 0);
    record();
    for (std::size_t k = 1; k <= cfg.iterations; ++k) {
        for (std::size_t n = 0; n < order; ++n) update(n, k);
        record();
    }
    out.factors = CpFactors(std::move(factors));
    return out;
}

}  // namespace dlcp
