// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dlcp/autodiff.hpp"
#include "dlcp/matrix.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

/// Fully connected initializer network: D hidden ReLU layers of Q units, Tanh output.
struct MlpArch {
    Dims dims;                ///< tensor shape I_1..I_N
    std::size_t rank = 1;     ///< R
    std::size_t hidden = 64;  ///< Q
    std::size_t layers = 2;   ///< D
    double dropout = 0.0;     ///< p
    bool is_complex = true;

    std::size_t input_dim() const;   ///< 2·ΠI_n (ΠI_n when real)
    std::size_t output_dim() const;  ///< 2R·Σ_{n≥2} I_n (R·Σ when real)
    void validate() const;
};

/// Closed-form parameter count of an MlpArch.
std::size_t param_count(const MlpArch& arch);

struct MlpModel {
    MlpArch arch;
    std::vector<RealMatrix> weights;  ///< layer l: out × in
    std::vector<RealMatrix> biases;   ///< layer l: out × 1

    /// Glorot-uniform weights U(±sqrt(6/(fan_in+fan_out))), zero biases.
    static MlpModel create(const MlpArch& arch, std::uint64_t seed);
    /// All weights and biases zero.
    static MlpModel zeros(const MlpArch& arch);

    std::size_t num_parameters() const;
    void validate() const;
};

/// Real parts of the column-major flattening, then imaginary parts (complex),
/// or real parts only (real).
RealMatrix pack_input(const ComplexTensor& y, bool is_complex = true);

/// Splits a network output into A_2..A_N. Per mode: I_n·R reals, then I_n·R
/// imaginaries (complex only), column-major.
std::vector<ComplexMatrix> unpack_output(const RealMatrix& v, const Dims& dims, std::size_t rank,
                                         bool is_complex = true);

/// Inference forward pass; no dropout.
RealMatrix mlp_infer(const MlpModel& model, const RealMatrix& x);

/// Inverted-dropout masks for one sample: one column vector per hidden layer.
std::vector<RealMatrix> dropout_masks(const MlpArch& arch, Rng& rng);

struct MlpVars {
    std::vector<ad::RVar> weights, biases;
};

/// Registers the model parameters on `t` as trainable leaves.
MlpVars bind_parameters(ad::Tape& t, const MlpModel& model);

/// Recorded forward pass. `masks` empty means no dropout.
ad::RVar mlp_forward(ad::Tape& t, const MlpModel& model, const MlpVars& vars, ad::RVar x,
                     const std::vector<RealMatrix>& masks);

struct FlopItem {
    std::string layer;
    std::size_t in = 0, out = 0;
    std::uint64_t macs = 0;       ///< in·out multiply-accumulates
    std::uint64_t bias_adds = 0;  ///< out
};

/// Per-layer real-flop accounting (MACs counted once, biases itemized apart).
std::vector<FlopItem> mlp_flops(const MlpArch& arch);

/// model.json + weights.bin
void save_model(const MlpModel& model, const std::filesystem::path& dir);
MlpModel load_model(const std::filesystem::path& dir);

inline constexpr int kModelFormatVersion = 1;

}  // namespace dlcp
