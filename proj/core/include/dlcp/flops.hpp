// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlcp/initializers.hpp"
#include "dlcp/mlp.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

enum class FlopOp { Gram, Matmul, KhatriRao, Hadamard, Inverse, Svd };

/// Complex-flop count of one primitive.
///   Gram      {m, n}     AᴴA, A m×n:      mn² + mn − n²/2 − n/2
///   Matmul    {m, n, l}  (m×n)(n×l):      2mnl − ml
///   KhatriRao {m, k, n}  (m×n) ⋄ (k×n):  mkn
///   Hadamard  {m, n}                      mn
///   Inverse   {n}                         n³ + n² + n
///   Svd       {n}                         ⌈(8/3)n³⌉
std::uint64_t cflops_primitive(FlopOp op, const std::vector<std::size_t>& dims);

struct CostItem {
    std::string stage;  ///< "init", "first_update" or "sweep"
    std::string op;
    std::string shape;
    std::uint64_t cflops = 0;
};

struct CostReport {
    Dims dims;
    std::size_t rank = 0;
    std::size_t iterations = 0;
    InitMethod method = InitMethod::Random;
    std::vector<CostItem> items;
    std::uint64_t init_cflops = 0;
    std::uint64_t first_update_cflops = 0;  ///< initial mode-1 update
    std::uint64_t per_iter_cflops = 0;      ///< one sweep over all modes
    std::uint64_t total_cflops = 0;         ///< init + first update + K·per_iter

    // learned init only
    std::vector<FlopItem> mlp_layers;
    std::uint64_t mlp_real_flops = 0;  ///< Σ in·out (MACs), converted with ⌈·/6⌉
    std::uint64_t mlp_bias_adds = 0;   ///< itemized apart, not in the cflop total

    std::string to_json() const;
    std::string to_table() const;
};

/// Sums primitive costs over one CPALS run with the LS step in the form
/// Y_(n)·[(⋄A*)·Γ⁻¹]. `arch` is required for InitMethod::Learned.
CostReport cost_profile(const Dims& dims, std::size_t rank, std::size_t iterations, InitMethod method,
                        const MlpArch* arch = nullptr);

}  // namespace dlcp
