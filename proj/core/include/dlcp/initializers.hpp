// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dlcp/mlp.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

enum class InitMethod { Random, Svd, Learned };

InitMethod parse_init_method(const std::string& name);  ///< "random" | "svd" | "dl" / "learned"
std::string to_string(InitMethod m);

struct InitSpec {
    InitMethod method = InitMethod::Random;
    double lo = 0.0, hi = 1.0;  ///< uniform bounds per real/imaginary part
    bool is_complex = true;
    std::uint64_t seed = 0;
    const MlpModel* model = nullptr;  ///< required for Learned
};

/// A_2..A_N with i.i.d. U(lo, hi) entries (real and imaginary parts drawn
/// independently when complex).
std::vector<ComplexMatrix> random_init(const Dims& dims, std::size_t rank, const InitSpec& spec, Rng& rng);
std::vector<ComplexMatrix> random_init(const Dims& dims, std::size_t rank, const InitSpec& spec);

struct SvdInit {
    std::vector<ComplexMatrix> factors;  ///< A_2..A_N
    bool degenerate = false;             ///< some mode had fewer than R significant singular values
};

/// R leading left singular vectors of Y_(n) for n = 2..N.
SvdInit svd_init(const ComplexTensor& y, std::size_t rank);

/// Network output for y unpacked into A_2..A_N; inference mode.
std::vector<ComplexMatrix> learned_init(const MlpModel& model, const ComplexTensor& y);

/// Dispatches on spec.method. Random draws use the stream (spec.seed, sample).
std::vector<ComplexMatrix> make_init(const ComplexTensor& y, std::size_t rank, const InitSpec& spec,
                                     std::uint64_t sample = 0);

}  // namespace dlcp
