// SPDX-License-Identifier: Apache-2.0
#include "dlcp/unrolled.hpp"

#include <cmath>
#include <string>

#include "dlcp/linalg.hpp"

namespace dlcp {

namespace {

ad::CVar kr_except(ad::Tape& t, const std::vector<ad::CVar>& a, std::size_t mode) {
    std::vector<ad::CVar> ops;
    for (std::size_t n = a.size(); n-- > 0;)
        if (n != mode) ops.push_back(a[n]);
    ad::CVar acc = ops.front();
    for (std::size_t k = 1; k < ops.size(); ++k) acc = ad::khatri_rao(t, acc, ops[k]);
    return acc;
}

}  // namespace

UnrolledGraph record_cpals(ad::Tape& t, const Unfoldings& y, const std::vector<ad::CVar>& init, std::size_t k) {
    const std::size_t order = y.order();
    require(order >= 2, "record_cpals: tensor order must be >= 2");
    require(init.size() == order - 1, "record_cpals: init must supply modes 2..N");
    const std::size_t r = t.value(init.front()).cols();
    for (std::size_t n = 1; n < order; ++n)
        require(t.value(init[n - 1]).rows() == y.dims()[n] && t.value(init[n - 1]).cols() == r,
                "record_cpals: init factor for mode " + std::to_string(n + 1) + " has the wrong shape");

    std::vector<ad::CVar> unf;
    for (std::size_t n = 0; n < order; ++n) unf.push_back(t.leaf(y[n]));
    const ad::CVar ones = t.leaf(ComplexMatrix(r, r, cplx{1.0, 0.0}));

    UnrolledGraph g;
    std::vector<ad::CVar> a(order, ad::CVar{0});
    for (std::size_t n = 1; n < order; ++n) a[n] = init[n - 1];

    auto update = [&](std::size_t mode) {
        const ad::CVar kr = kr_except(t, a, mode);
        const ad::CVar m = ad::matmul(t, unf[mode], ad::conj(t, kr));
        ad::CVar gram = ones;
        for (std::size_t l = 0; l < order; ++l)
            if (l != mode) gram = ad::hadamard(t, gram, ad::gram_t(t, a[l]));
        bool reg = false;
        a[mode] = ad::right_hermitian_solve(t, m, gram, &reg);
        if (reg) ++g.regularized_solves;
        if (!all_finite(t.value(a[mode])))
            throw NumericalError("unrolled ALS: non-finite factor in mode " + std::to_string(mode + 1));
    };
    update(0);
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t n = 0; n < order; ++n) update(n);

    const ad::CVar rec = ad::matmul(t, a[0], ad::transpose(t, kr_except(t, a, 0)));
    g.loss = ad::frob_sq(t, ad::sub_const(t, rec, y[0]));
    g.factors = a;
    return g;
}

LossGrad unrolled_loss(const MlpModel& model, const ComplexTensor& y, std::size_t k,
                       const std::vector<RealMatrix>& masks, bool with_grad) {
    const MlpArch& arch = model.arch;
    require(y.dims() == arch.dims, "unrolled_loss: tensor shape does not match the model");
    ad::Tape t;
    const MlpVars vars = bind_parameters(t, model);
    const ad::RVar x = t.leaf(pack_input(y, arch.is_complex));
    const ad::RVar out = mlp_forward(t, model, vars, x, masks);

    std::vector<ad::CVar> init;
    std::size_t off = 0;
    for (std::size_t n = 1; n < arch.dims.size(); ++n) {
        const std::size_t cnt = arch.dims[n] * arch.rank;
        const std::size_t im = off + cnt;
        init.push_back(ad::to_complex_block(t, out, off, arch.dims[n], arch.rank, arch.is_complex ? &im : nullptr));
        off += (arch.is_complex ? 2 : 1) * cnt;
    }

    const Unfoldings unf(y);
    const UnrolledGraph g = record_cpals(t, unf, init, k);
    LossGrad res;
    res.loss = t.value(g.loss)[0];
    res.regularized_solves = g.regularized_solves;
    if (!std::isfinite(res.loss)) throw NumericalError("unrolled_loss: non-finite loss");
    if (!with_grad) return res;

    t.backward(g.loss);
    for (std::size_t l = 0; l < vars.weights.size(); ++l) {
        res.grad_w.push_back(t.grad(vars.weights[l]));
        res.grad_b.push_back(t.grad(vars.biases[l]));
    }
    return res;
}

ComplexMatrix commutation_matrix(std::size_t m, std::size_t n) {
    ComplexMatrix k(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) k(j + i * n, i + j * m) = 1.0;
    return k;
}

ComplexMatrix analytic_grad_step0(const ComplexTensor& y, const ComplexMatrix& a2, const ComplexMatrix& a3) {
    require(y.order() == 3, "analytic_grad_step0: 3-way tensors only");
    require(a2.rows() == y.dim(1) && a3.rows() == y.dim(2) && a2.cols() == a3.cols(),
            "analytic_grad_step0: factor shapes do not match the tensor");
    const std::size_t r = a2.cols();
    const std::size_t i2 = a2.rows();

    const ComplexMatrix m = matmul(matricize(y, 0), conj(khatri_rao(a3, a2)));
    const ComplexMatrix g3 = conj(matmul_ah_b(a3, a3));
    const ComplexMatrix g = hadamard(g3, conj(matmul_ah_b(a2, a2)));
    const SolveResult inv = hermitian_solve(g, ComplexMatrix::identity(r));
    if (inv.regularized) throw NumericalError("analytic_grad_step0: singular Gram product");
    const ComplexMatrix& ginv = inv.x;

    ComplexMatrix dvec_g(r * r, r * r);
    for (std::size_t k = 0; k < r * r; ++k) dvec_g(k, k) = g3[k];

    ComplexMatrix j = kron(ComplexMatrix::identity(r), m);
    j = matmul(j, kron(transpose(ginv), ginv) * cplx{-1.0, 0.0});
    j = matmul(j, dvec_g);
    j = matmul(j, kron(adjoint(a2), ComplexMatrix::identity(r)));
    return matmul(j, commutation_matrix(i2, r));
}

}  // namespace dlcp
