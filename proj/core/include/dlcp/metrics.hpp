// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dlcp/channel.hpp"
#include "dlcp/cp_model.hpp"

namespace dlcp {

/// Path parameters recovered from estimated factors. theta1/theta2 refer to
/// tensor modes 1 and 2.
struct ExtractedParams {
    std::vector<double> theta1, theta2, tau_ns;
    std::vector<cplx> beta;
};

/// ẑ per mode and column by extract_generating_vector; gains from
/// β̃_r = Π_n v_nᴴâ_n / I_n with v_n rebuilt from ẑ (mode 3 on the block rows
/// starting at m_s), then β = β̃·e^{jẑ₃}.
ExtractedParams extract_channel_params(const CpFactors& est, std::size_t m_s, const ChannelConstants& c = {});

/// Σ|sorted(est) − sorted(truth)|² / Σ|truth|², both sorted descending.
double sorted_nse(std::vector<double> est, std::vector<double> truth);
/// Same for complex values, sorted by descending magnitude.
double sorted_nse(std::vector<cplx> est, std::vector<cplx> truth);

struct ParamNse {
    double theta1 = 0.0, theta2 = 0.0, tau = 0.0, gain = 0.0;
};

ParamNse channel_param_nse(const ExtractedParams& est, const ChannelParams& truth);

struct CdfPoint {
    double value = 0.0;
    double prob = 0.0;  ///< fraction of samples ≤ value
};

/// Empirical CDF at every sample value (sorted ascending).
std::vector<CdfPoint> empirical_cdf(std::vector<double> values);

}  // namespace dlcp
