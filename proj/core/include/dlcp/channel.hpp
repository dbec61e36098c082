// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlcp/cp_model.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

struct ChannelConstants {
    double d_over_lambda = 0.5;
    double fs = 0.32e9;      ///< sampling rate, Hz
    std::size_t m0 = 128;    ///< total subcarriers
    double max_delay_ns = 100.0;
};

/// Per-path parameters. theta1/theta2 are spatial angles 2π(d/λ)·sin(angle).
struct ChannelParams {
    std::vector<double> theta1, theta2;
    std::vector<double> tau_ns;
    std::vector<cplx> beta;

    std::size_t rank() const noexcept { return beta.size(); }
};

/// AoA, AoD ~ U(−π/2, π/2), τ ~ U(0, max_delay) ns, β ~ CN(0, 1).
ChannelParams gen_params(std::size_t rank, Rng& rng, const ChannelConstants& c = {});

/// 2π·τ·f_s/M₀
double delay_generator(double tau_ns, const ChannelConstants& c = {});

struct BlockChannel {
    ComplexTensor h;
    CpFactors factors;  ///< weights β·e^{−j z₃}, Vandermonde factors
};

/// ℋ = ⟦β̃; Van(Θ₁), Van(Θ₂), rows m_s..m_s+M−1 of Van(z₃)⟧ with 1-based m_s.
BlockChannel build_block_channel(const ChannelParams& p, std::size_t i1, std::size_t i2, std::size_t m,
                                 std::size_t m_s, const ChannelConstants& c = {});

/// Unitary DFT matrix of size n.
ComplexMatrix dft_matrix(std::size_t n);

struct PilotConfig {
    ComplexMatrix f1;       ///< combiner, I₁×N₁
    ComplexMatrix f2;       ///< beamformer, I₂×N₂
    std::vector<cplx> x;    ///< pilot symbols, length N₂
    double sigma2 = 0.0;

    /// Unitary DFT combiner/beamformer, all-ones pilots.
    static PilotConfig dft(std::size_t i1, std::size_t i2, double sigma2);
    /// Rejects non-square or non-orthogonal F₁, F₂ and |x| ≠ 1.
    void validate() const;
};

/// σ² giving the requested SNR for this channel: ‖ℋ‖²/(numel·10^{snr/10}).
double noise_variance_for_snr(const ComplexTensor& h, double snr_db);

/// 𝒴 = ℋ ×₁ F₁ᴴ ×₂ diag(x)F₂ᵀ + 𝒩 ×₁ F₁ᴴ, 𝒩 i.i.d. CN(0, σ²).
ComplexTensor received_signal(const ComplexTensor& h, const PilotConfig& cfg, Rng& rng);

/// 𝒴 ×₁ F₁ ×₂ F₂*.
ComplexTensor coarse_estimate(const ComplexTensor& y, const PilotConfig& cfg);

/// argmax_z |âᴴ Van(z)| over (−π, π]: 4096-point grid then golden-section
/// refinement to |Δz| < 1e-8.
double extract_generating_vector(std::span<const cplx> a_hat);

}  // namespace dlcp
