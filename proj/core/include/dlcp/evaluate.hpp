// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlcp/als.hpp"
#include "dlcp/dataset.hpp"
#include "dlcp/initializers.hpp"

namespace dlcp {

struct EvalConfig {
    std::size_t rank = 1;
    std::size_t iterations = 0;
    InitSpec init;
    bool truth_init = false;  ///< start from the ground-truth factors instead of init
    std::size_t threads = 1;
};

struct SampleRun {
    AlsTrace trace;   ///< nse filled when the dataset carries clean tensors
    CpFactors factors;
    bool degenerate_init = false;
};

/// Initializer plus CPALS on every sample. Per-sample work is independent, so
/// results do not depend on the thread count.
std::vector<SampleRun> run_dataset(const Dataset& ds, const EvalConfig& cfg);

/// Ground-truth A_2..A_N of one sample (weights folded into mode 1).
std::vector<ComplexMatrix> truth_init(const Sample& s, const DatasetMeta& meta);

struct Curves {
    std::vector<double> mean_objective;  ///< per iteration 0..K
    std::vector<double> anse;            ///< empty without clean tensors
};

/// Means over samples, reduced in sample order.
Curves summarize(std::span<const SampleRun> runs);

/// First iteration whose value is ≤ target.
std::optional<std::size_t> first_reaching(std::span<const double> curve, double target);

}  // namespace dlcp
