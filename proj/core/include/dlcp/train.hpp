// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dlcp/mlp.hpp"
#include "dlcp/tensor.hpp"

namespace dlcp {

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t step = 0;
    std::vector<RealMatrix> m, v;  ///< one per parameter block

    /// Zero moments shaped like `params`.
    static AdamState like(std::span<const RealMatrix> params, double lr);
};

/// Bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<RealMatrix> params, std::span<const RealMatrix> grads);

struct TrainStage {
    std::size_t k = 2;       ///< unrolled sweeps
    double lr = 1e-3;
    std::size_t epochs = 1;
};

/// Parses "K:lr:epochs[,K:lr:epochs...]".
std::vector<TrainStage> parse_stages(const std::string& text);

struct TrainConfig {
    std::vector<TrainStage> stages;
    std::size_t batch = 128;  ///< L
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct EpochRecord {
    std::size_t epoch = 0;  ///< 1-based over all stages
    std::size_t stage = 0;
    double mean_loss = 0.0;
    std::size_t failed = 0;  ///< samples skipped for non-finite values
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Per epoch: a seeded shuffle, ⌈L_tr/L⌉ mini-batches without
/// replacement, mean per-sample loss, backprop and one Adam step per batch.
/// Per-sample gradients are reduced in fixed chunks so the result does not
/// depend on the thread count. Throws NumericalError when more than half of
/// an epoch's samples fail.
std::vector<EpochRecord> train(MlpModel& model, std::span<const ComplexTensor> data, const TrainConfig& cfg,
                               const EpochCallback& on_epoch = {});

}  // namespace dlcp
