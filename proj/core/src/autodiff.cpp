// SPDX-License-Identifier: Apache-2.0
#include "dlcp/autodiff.hpp"

#include <cmath>

#include "dlcp/linalg.hpp"

namespace dlcp::ad {

// ---- tape ------------------------------------------------------------------

RVar Tape::leaf(RealMatrix value, bool requires_grad) { return push_real(std::move(value), requires_grad, {}); }

CVar Tape::leaf(ComplexMatrix value, bool requires_grad) {
    return push_complex(std::move(value), requires_grad, {});
}

RVar Tape::param(const RealMatrix& value) {
    Node n;
    n.requires_grad = true;
    n.external = &value;
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1};
}

RVar Tape::push_real(RealMatrix value, bool requires_grad, BackwardFn fn) {
    Node n;
    n.rval = std::move(value);
    n.requires_grad = requires_grad;
    if (requires_grad) n.backward = std::move(fn);
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1};
}

CVar Tape::push_complex(ComplexMatrix value, bool requires_grad, BackwardFn fn) {
    Node n;
    n.is_complex = true;
    n.cval = std::move(value);
    n.requires_grad = requires_grad;
    if (requires_grad) n.backward = std::move(fn);
    nodes_.push_back(std::move(n));
    return {nodes_.size() - 1};
}

const RealMatrix& Tape::value(RVar v) const {
    const Node& n = nodes_.at(v.id);
    require(!n.is_complex, "Tape::value: node is complex");
    return n.external ? *n.external : n.rval;
}

const ComplexMatrix& Tape::value(CVar v) const {
    const Node& n = nodes_.at(v.id);
    require(n.is_complex, "Tape::value: node is real");
    return n.cval;
}

RealMatrix Tape::grad(RVar v) const {
    const Node& n = nodes_.at(v.id);
    if (n.grad_allocated) return n.rgrad;
    const RealMatrix& val = value(v);
    return RealMatrix(val.rows(), val.cols());
}

ComplexMatrix Tape::grad(CVar v) const {
    const Node& n = nodes_.at(v.id);
    if (n.grad_allocated) return n.cgrad;
    return ComplexMatrix(n.cval.rows(), n.cval.cols());
}

RealMatrix& Tape::rgrad(std::size_t id) {
    Node& n = nodes_[id];
    if (!n.grad_allocated) {
        const RealMatrix& val = n.external ? *n.external : n.rval;
        n.rgrad = RealMatrix(val.rows(), val.cols());
        n.grad_allocated = true;
    }
    return n.rgrad;
}

ComplexMatrix& Tape::cgrad(std::size_t id) {
    Node& n = nodes_[id];
    if (!n.grad_allocated) {
        n.cgrad = ComplexMatrix(n.cval.rows(), n.cval.cols());
        n.grad_allocated = true;
    }
    return n.cgrad;
}

void Tape::clear_grads() {
    for (auto& n : nodes_) {
        n.grad_allocated = false;
        n.rgrad = RealMatrix();
        n.cgrad = ComplexMatrix();
    }
}

void Tape::sweep(std::size_t root) {
    for (std::size_t i = root + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.grad_allocated && n.backward) n.backward(*this);
    }
}

void Tape::backward(RVar root, double seed) {
    const RealMatrix& v = value(root);
    require(v.rows() == 1 && v.cols() == 1, "Tape::backward: root must be a 1x1 scalar");
    backward(root, RealMatrix(1, 1, seed));
}

void Tape::backward(RVar root, const RealMatrix& seed) {
    clear_grads();
    if (!nodes_.at(root.id).requires_grad) return;
    RealMatrix& g = rgrad(root.id);
    require(g.rows() == seed.rows() && g.cols() == seed.cols(), "Tape::backward: seed shape mismatch");
    g = seed;
    sweep(root.id);
}

void Tape::backward(CVar root, const ComplexMatrix& seed) {
    clear_grads();
    if (!nodes_.at(root.id).requires_grad) return;
    ComplexMatrix& g = cgrad(root.id);
    require(g.rows() == seed.rows() && g.cols() == seed.cols(), "Tape::backward: seed shape mismatch");
    g = seed;
    sweep(root.id);
}

// ---- real primitives -------------------------------------------------------

RealMatrix affine_value(const RealMatrix& w, const RealMatrix& x, const RealMatrix& b) {
    require(x.cols() == 1 && w.cols() == x.rows(), "affine: input dimension mismatch");
    require(b.rows() == w.rows() && b.cols() == 1, "affine: bias dimension mismatch");
    RealMatrix y = b;
    double* yp = y.data().data();
    const std::size_t out = w.rows();
    for (std::size_t k = 0; k < w.cols(); ++k) {
        const double xk = x[k];
        if (xk == 0.0) continue;
        const double* wk = w.col(k).data();
        for (std::size_t i = 0; i < out; ++i) yp[i] += wk[i] * xk;
    }
    return y;
}

RVar affine(Tape& t, RVar w, RVar x, RVar b) {
    RealMatrix y = affine_value(t.value(w), t.value(x), t.value(b));
    const bool rg = t.requires_grad(w.id) || t.requires_grad(x.id) || t.requires_grad(b.id);
    RVar out{t.size()};
    return t.push_real(std::move(y), rg, [w, x, b, out](Tape& tp) {
        const RealMatrix& gy = tp.rgrad(out.id);
        const RealMatrix& wv = tp.value(w);
        const RealMatrix& xv = tp.value(x);
        if (tp.requires_grad(w.id)) {
            RealMatrix& gw = tp.rgrad(w.id);
            for (std::size_t k = 0; k < wv.cols(); ++k) {
                const double xk = xv[k];
                if (xk == 0.0) continue;
                double* gwk = gw.col(k).data();
                for (std::size_t i = 0; i < wv.rows(); ++i) gwk[i] += gy[i] * xk;
            }
        }
        if (tp.requires_grad(b.id)) tp.rgrad(b.id) += gy;
        if (tp.requires_grad(x.id)) {
            RealMatrix& gx = tp.rgrad(x.id);
            for (std::size_t k = 0; k < wv.cols(); ++k) {
                const double* wk = wv.col(k).data();
                double s = 0.0;
                for (std::size_t i = 0; i < wv.rows(); ++i) s += wk[i] * gy[i];
                gx[k] += s;
            }
        }
    });
}

RVar relu(Tape& t, RVar x) {
    RealMatrix y = t.value(x);
    for (auto& v : y.data()) v = v > 0.0 ? v : 0.0;
    RVar out{t.size()};
    return t.push_real(std::move(y), t.requires_grad(x.id), [x, out](Tape& tp) {
        const RealMatrix& gy = tp.rgrad(out.id);
        const RealMatrix& xv = tp.value(x);
        RealMatrix& gx = tp.rgrad(x.id);
        for (std::size_t k = 0; k < xv.size(); ++k)
            if (xv[k] > 0.0) gx[k] += gy[k];
    });
}

RVar tanh(Tape& t, RVar x) {
    RealMatrix y = t.value(x);
    for (auto& v : y.data()) v = std::tanh(v);
    RVar out{t.size()};
    return t.push_real(std::move(y), t.requires_grad(x.id), [x, out](Tape& tp) {
        const RealMatrix& gy = tp.rgrad(out.id);
        const RealMatrix& yv = tp.value(out);
        RealMatrix& gx = tp.rgrad(x.id);
        for (std::size_t k = 0; k < yv.size(); ++k) gx[k] += gy[k] * (1.0 - yv[k] * yv[k]);
    });
}

RVar dropout(Tape& t, RVar x, const RealMatrix& mask) {
    const RealMatrix& xv = t.value(x);
    require(mask.rows() == xv.rows() && mask.cols() == xv.cols(), "dropout: mask shape mismatch");
    RealMatrix y = xv;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= mask[k];
    RVar out{t.size()};
    return t.push_real(std::move(y), t.requires_grad(x.id), [x, out, mask](Tape& tp) {
        const RealMatrix& gy = tp.rgrad(out.id);
        RealMatrix& gx = tp.rgrad(x.id);
        for (std::size_t k = 0; k < gy.size(); ++k) gx[k] += gy[k] * mask[k];
    });
}

RVar sum(Tape& t, RVar x) {
    double s = 0.0;
    for (auto v : t.value(x).data()) s += v;
    RVar out{t.size()};
    return t.push_real(RealMatrix(1, 1, s), t.requires_grad(x.id), [x, out](Tape& tp) {
        const double g = tp.rgrad(out.id)[0];
        for (auto& v : tp.rgrad(x.id).data()) v += g;
    });
}

RVar sq_norm(Tape& t, RVar x) {
    double s = 0.0;
    for (auto v : t.value(x).data()) s += v * v;
    RVar out{t.size()};
    return t.push_real(RealMatrix(1, 1, s), t.requires_grad(x.id), [x, out](Tape& tp) {
        const double g = tp.rgrad(out.id)[0];
        const RealMatrix& xv = tp.value(x);
        RealMatrix& gx = tp.rgrad(x.id);
        for (std::size_t k = 0; k < xv.size(); ++k) gx[k] += 2.0 * xv[k] * g;
    });
}

RVar add_scalars(Tape& t, RVar a, RVar b) {
    const double s = t.value(a)[0] + t.value(b)[0];
    const bool rg = t.requires_grad(a.id) || t.requires_grad(b.id);
    RVar out{t.size()};
    return t.push_real(RealMatrix(1, 1, s), rg, [a, b, out](Tape& tp) {
        const double g = tp.rgrad(out.id)[0];
        if (tp.requires_grad(a.id)) tp.rgrad(a.id)[0] += g;
        if (tp.requires_grad(b.id)) tp.rgrad(b.id)[0] += g;
    });
}

// ---- pack ------------------------------------------------------------------

CVar to_complex_block(Tape& t, RVar v, std::size_t re_offset, std::size_t rows, std::size_t cols,
                      const std::size_t* im_offset) {
    const RealMatrix& src = t.value(v);
    const std::size_t n = rows * cols;
    require(re_offset + n <= src.size(), "to_complex_block: real block out of range");
    const bool has_im = im_offset != nullptr;
    const std::size_t im_off = has_im ? *im_offset : 0;
    if (has_im) require(im_off + n <= src.size(), "to_complex_block: imaginary block out of range");
    ComplexMatrix c(rows, cols);
    for (std::size_t k = 0; k < n; ++k) c[k] = cplx(src[re_offset + k], has_im ? src[im_off + k] : 0.0);
    CVar out{t.size()};
    return t.push_complex(std::move(c), t.requires_grad(v.id), [v, out, re_offset, im_off, has_im, n](Tape& tp) {
        const ComplexMatrix& g = tp.cgrad(out.id);
        RealMatrix& gv = tp.rgrad(v.id);
        for (std::size_t k = 0; k < n; ++k) {
            gv[re_offset + k] += g[k].real();
            if (has_im) gv[im_off + k] += g[k].imag();
        }
    });
}

// ---- complex primitives ----------------------------------------------------

CVar matmul(Tape& t, CVar a, CVar b) {
    ComplexMatrix c = dlcp::matmul(t.value(a), t.value(b));
    const bool rg = t.requires_grad(a.id) || t.requires_grad(b.id);
    CVar out{t.size()};
    return t.push_complex(std::move(c), rg, [a, b, out](Tape& tp) {
        const ComplexMatrix& g = tp.cgrad(out.id);
        if (tp.requires_grad(a.id)) tp.cgrad(a.id) += matmul_a_bh(g, tp.value(b));
        if (tp.requires_grad(b.id)) tp.cgrad(b.id) += matmul_ah_b(tp.value(a), g);
    });
}

CVar conj(Tape& t, CVar a) {
    CVar out{t.size()};
    return t.push_complex(dlcp::conj(t.value(a)), t.requires_grad(a.id), [a, out](Tape& tp) {
        tp.cgrad(a.id) += dlcp::conj(tp.cgrad(out.id));
    });
}

CVar transpose(Tape& t, CVar a) {
    CVar out{t.size()};
    return t.push_complex(dlcp::transpose(t.value(a)), t.requires_grad(a.id), [a, out](Tape& tp) {
        tp.cgrad(a.id) += dlcp::transpose(tp.cgrad(out.id));
    });
}

CVar khatri_rao(Tape& t, CVar a, CVar b) {
    ComplexMatrix c = dlcp::khatri_rao(t.value(a), t.value(b));
    const bool rg = t.requires_grad(a.id) || t.requires_grad(b.id);
    CVar out{t.size()};
    return t.push_complex(std::move(c), rg, [a, b, out](Tape& tp) {
        const ComplexMatrix& g = tp.cgrad(out.id);
        const ComplexMatrix& av = tp.value(a);
        const ComplexMatrix& bv = tp.value(b);
        const std::size_t nb = bv.rows();
        if (tp.requires_grad(a.id)) {
            ComplexMatrix& ga = tp.cgrad(a.id);
            for (std::size_t r = 0; r < av.cols(); ++r)
                for (std::size_t i = 0; i < av.rows(); ++i) {
                    cplx s{};
                    for (std::size_t k = 0; k < nb; ++k) s += g(i * nb + k, r) * std::conj(bv(k, r));
                    ga(i, r) += s;
                }
        }
        if (tp.requires_grad(b.id)) {
            ComplexMatrix& gb = tp.cgrad(b.id);
            for (std::size_t r = 0; r < av.cols(); ++r)
                for (std::size_t i = 0; i < av.rows(); ++i) {
                    const cplx ac = std::conj(av(i, r));
                    for (std::size_t k = 0; k < nb; ++k) gb(k, r) += g(i * nb + k, r) * ac;
                }
        }
    });
}

CVar hadamard(Tape& t, CVar a, CVar b) {
    ComplexMatrix c = dlcp::hadamard(t.value(a), t.value(b));
    const bool rg = t.requires_grad(a.id) || t.requires_grad(b.id);
    CVar out{t.size()};
    return t.push_complex(std::move(c), rg, [a, b, out](Tape& tp) {
        const ComplexMatrix& g = tp.cgrad(out.id);
        if (tp.requires_grad(a.id)) tp.cgrad(a.id) += dlcp::hadamard(g, dlcp::conj(tp.value(b)));
        if (tp.requires_grad(b.id)) tp.cgrad(b.id) += dlcp::hadamard(g, dlcp::conj(tp.value(a)));
    });
}

CVar gram_t(Tape& t, CVar a) {
    CVar out{t.size()};
    return t.push_complex(dlcp::conj(matmul_ah_b(t.value(a), t.value(a))), t.requires_grad(a.id), [a, out](Tape& tp) {
        // P = Aᵀ A*  ⇒  Ḡ_A = A·(conj(Ḡ_P) + Ḡ_Pᵀ)
        const ComplexMatrix& g = tp.cgrad(out.id);
        tp.cgrad(a.id) += dlcp::matmul(tp.value(a), dlcp::conj(g) + dlcp::transpose(g));
    });
}

CVar right_hermitian_solve(Tape& t, CVar m, CVar g, bool* regularized) {
    SolveResult s = hermitian_solve_right(t.value(m), t.value(g));
    if (regularized) *regularized = s.regularized;
    const double eps = s.regularized ? s.epsilon : 0.0;
    const bool rg = t.requires_grad(m.id) || t.requires_grad(g.id);
    CVar out{t.size()};
    return t.push_complex(std::move(s.x), rg, [m, g, out, eps](Tape& tp) {
        // X = M Γ⁻¹  ⇒  S = Ḡ_X Γ⁻ᴴ,  Ḡ_M = S,  Ḡ_Γ = −Xᴴ S
        ComplexMatrix gamma = tp.value(g);
        for (std::size_t i = 0; i < gamma.rows(); ++i) gamma(i, i) += eps;
        const ComplexMatrix sol = hermitian_solve_right(tp.cgrad(out.id), gamma).x;
        if (tp.requires_grad(m.id)) tp.cgrad(m.id) += sol;
        if (tp.requires_grad(g.id)) tp.cgrad(g.id) -= matmul_ah_b(tp.value(out), sol);
    });
}

CVar sub_const(Tape& t, CVar a, const ComplexMatrix& c) {
    CVar out{t.size()};
    return t.push_complex(t.value(a) - c, t.requires_grad(a.id), [a, out](Tape& tp) {
        tp.cgrad(a.id) += tp.cgrad(out.id);
    });
}

RVar frob_sq(Tape& t, CVar a) {
    RVar out{t.size()};
    return t.push_real(RealMatrix(1, 1, frob_norm_sq(t.value(a))), t.requires_grad(a.id), [a, out](Tape& tp) {
        const double g = tp.rgrad(out.id)[0];
        tp.cgrad(a.id) += tp.value(a) * cplx(2.0 * g, 0.0);
    });
}

}  // namespace dlcp::ad
