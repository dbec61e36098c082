// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dlcp/matrix.hpp"

namespace dlcp::ad {

// Gradient convention
// -------------------
// Every complex quantity z = x + iy is treated as the real pair (x, y).
// Its gradient is stored as one complex number  ∂L/∂x + i·∂L/∂y.
// Under that packing the usual adjoint rules read, e.g. for C = A·B:
//   Ḡ_A = Ḡ_C·Bᴴ,  Ḡ_B = Aᴴ·Ḡ_C,
// and for C = conj(A): Ḡ_A = conj(Ḡ_C).

struct RVar {
    std::size_t id;
};
struct CVar {
    std::size_t id;
};

class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;
    Tape(Tape&&) = default;
    Tape& operator=(Tape&&) = default;

    /// Leaf owning its value.
    RVar leaf(RealMatrix value, bool requires_grad = false);
    CVar leaf(ComplexMatrix value, bool requires_grad = false);
    /// Trainable leaf referencing caller-owned storage; it must outlive the tape.
    RVar param(const RealMatrix& value);

    const RealMatrix& value(RVar v) const;
    const ComplexMatrix& value(CVar v) const;
    /// Gradient of the last backward() root; zeros when the node was not reached.
    RealMatrix grad(RVar v) const;
    ComplexMatrix grad(CVar v) const;
    bool requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }

    /// Reverse sweep from a 1×1 real root, seeded with `seed`.
    void backward(RVar root, double seed = 1.0);
    /// Reverse sweep from an arbitrary real/complex node with an explicit upstream gradient.
    void backward(RVar root, const RealMatrix& seed);
    void backward(CVar root, const ComplexMatrix& seed);

    std::size_t size() const noexcept { return nodes_.size(); }

    // ---- used by op implementations ---------------------------------------
    using BackwardFn = std::function<void(Tape&)>;
    RVar push_real(RealMatrix value, bool requires_grad, BackwardFn fn);
    CVar push_complex(ComplexMatrix value, bool requires_grad, BackwardFn fn);
    /// Gradient accumulator of node `id`, allocated to the node's shape on first use.
    RealMatrix& rgrad(std::size_t id);
    ComplexMatrix& cgrad(std::size_t id);
    bool has_grad(std::size_t id) const { return nodes_[id].grad_allocated; }

private:
    struct Node {
        bool is_complex = false;
        bool requires_grad = false;
        bool grad_allocated = false;
        RealMatrix rval, rgrad;
        ComplexMatrix cval, cgrad;
        const RealMatrix* external = nullptr;
        BackwardFn backward;
    };
    void clear_grads();
    void sweep(std::size_t root);

    std::vector<Node> nodes_;
};

// ---- real primitives ------------------------------------------------------
/// Plain W·x + b; the kernel behind affine(), shared with tape-free inference.
RealMatrix affine_value(const RealMatrix& w, const RealMatrix& x, const RealMatrix& b);

/// W·x + b with W (out×in), x (in×1), b (out×1).
RVar affine(Tape& t, RVar w, RVar x, RVar b);
RVar relu(Tape& t, RVar x);
RVar tanh(Tape& t, RVar x);
/// x ⊙ mask, mask a constant (0 or 1/(1−p) for inverted dropout).
RVar dropout(Tape& t, RVar x, const RealMatrix& mask);
/// Σ x_i (1×1).
RVar sum(Tape& t, RVar x);
/// Σ x_i² (1×1).
RVar sq_norm(Tape& t, RVar x);
/// Sum of two 1×1 scalars.
RVar add_scalars(Tape& t, RVar a, RVar b);

// ---- pack / reshape -------------------------------------------------------
/// Reads rows×cols real parts starting at `re_offset` (column-major) and,
/// when `im_offset` is given, the imaginary parts starting there.
CVar to_complex_block(Tape& t, RVar v, std::size_t re_offset, std::size_t rows, std::size_t cols,
                      const std::size_t* im_offset);

// ---- complex primitives ---------------------------------------------------
CVar matmul(Tape& t, CVar a, CVar b);
CVar conj(Tape& t, CVar a);
CVar transpose(Tape& t, CVar a);
CVar khatri_rao(Tape& t, CVar a, CVar b);
CVar hadamard(Tape& t, CVar a, CVar b);
/// Aᵀ·A*, evaluated as conj(Aᴴ·A).
CVar gram_t(Tape& t, CVar a);
/// m·g⁻¹ for Hermitian g, differentiated through the solve (including the
/// flagged Tikhonov ridge when the forward solve needed it).
CVar right_hermitian_solve(Tape& t, CVar m, CVar g, bool* regularized = nullptr);
/// a − c for constant c.
CVar sub_const(Tape& t, CVar a, const ComplexMatrix& c);
/// ‖a‖²_F as a 1×1 real node.
RVar frob_sq(Tape& t, CVar a);

}  // namespace dlcp::ad
