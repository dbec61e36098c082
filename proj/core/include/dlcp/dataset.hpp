// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dlcp/channel.hpp"
#include "dlcp/cp_model.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

inline constexpr int kDatasetFormatVersion = 1;

struct DatasetMeta {
    std::string family;  ///< "synthetic" | "channel"
    Dims dims;
    std::size_t rank = 1;
    std::size_t count = 0;
    std::vector<double> snr_set;
    std::vector<double> sample_snr_db;  ///< one per sample
    std::uint64_t seed = 0;
    bool is_complex = true;  ///< false: every stored value has zero imaginary part
    bool has_clean = true;
    bool has_params = true;
    bool noise_free = false;
    std::string dist;  ///< synthetic factor distribution

    // channel family
    ChannelConstants constants;
    std::size_t block = 0;            ///< M
    bool bs_first = false;            ///< tensor modes (BS, MS, subcarrier) instead of (MS, BS, subcarrier)

    /// Length of one parameter block in float64 values.
    std::size_t param_len() const;
    void validate() const;
};

struct Sample {
    ComplexTensor noisy;
    ComplexTensor clean;         ///< empty unless has_clean
    std::vector<double> params;  ///< empty unless has_params
};

struct Dataset {
    DatasetMeta meta;
    std::vector<Sample> samples;
};

/// meta.json + data.bin. Throws IoError on file-system failures.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);
DatasetMeta load_dataset_meta(const std::filesystem::path& dir);

struct SyntheticConfig {
    Dims dims{6, 6, 6};
    std::size_t rank = 3;
    std::size_t count = 1000;
    double snr_db = 15.0;
    bool noise_free = false;
    std::string dist = "real-uniform";  ///< "real-uniform" | "complex-uniform", U(0,1) per part
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Low-rank tensors with U(0,1) factors plus white Gaussian noise at the
/// requested per-sample SNR (real noise for real data).
Dataset gen_synthetic(const SyntheticConfig& cfg);

/// Ground-truth factors of a synthetic sample.
CpFactors synthetic_truth(const Sample& s, const DatasetMeta& meta);

struct ChannelGenConfig {
    std::size_t ms = 8;   ///< I₁, MS array
    std::size_t bs = 32;  ///< I₂, BS array
    std::size_t block = 4;
    std::size_t rank = 4;
    std::size_t count = 1000;
    std::vector<double> snr_set{5, 10, 15, 20, 25};
    bool noise_free = false;
    bool bs_first = false;
    ChannelConstants constants;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

/// Coarse channel estimates of random block channels; SNR per sample drawn
/// from the set, m_s uniform on {1..M₀−M+1}.
Dataset gen_channel(const ChannelGenConfig& cfg);

struct ChannelTruth {
    ChannelParams params;  ///< theta1/theta2 in tensor-mode order
    std::size_t m_s = 1;
};

ChannelTruth channel_truth(const Sample& s, const DatasetMeta& meta);

/// Noise variance of sample k (0 when noise-free or when no clean tensor).
double sample_sigma2(const Dataset& ds, std::size_t k);

}  // namespace dlcp
