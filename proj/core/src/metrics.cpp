// SPDX-License-Identifier: Apache-2.0
#include "dlcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dlcp {

ExtractedParams extract_channel_params(const CpFactors& est, std::size_t m_s, const ChannelConstants& c) {
    est.validate();
    require(est.order() == 3, "extract_channel_params: 3-way factors expected");
    require(m_s >= 1, "extract_channel_params: m_s is 1-based");
    ExtractedParams out;
    for (std::size_t r = 0; r < est.rank(); ++r) {
        double z[3];
        cplx gain = est.weights[r];
        for (std::size_t n = 0; n < 3; ++n) {
            const auto col = est.factors[n].col(r);
            z[n] = extract_generating_vector(col);
            const double offset = n == 2 ? static_cast<double>(m_s - 1) : 0.0;
            cplx ip{};
            for (std::size_t i = 0; i < col.size(); ++i)
                ip += std::polar(1.0, (offset + static_cast<double>(i)) * z[n]) * col[i];  // conj(v_i)·â_i
            gain *= ip / static_cast<double>(col.size());
        }
        out.theta1.push_back(z[0]);
        out.theta2.push_back(z[1]);
        out.tau_ns.push_back(z[2] * static_cast<double>(c.m0) / (2.0 * std::numbers::pi * c.fs) * 1e9);
        out.beta.push_back(gain * std::polar(1.0, z[2]));
    }
    return out;
}

double sorted_nse(std::vector<double> est, std::vector<double> truth) {
    require(est.size() == truth.size() && !est.empty(), "sorted_nse: length mismatch");
    std::sort(est.begin(), est.end(), std::greater<>());
    std::sort(truth.begin(), truth.end(), std::greater<>());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        num += (est[k] - truth[k]) * (est[k] - truth[k]);
        den += truth[k] * truth[k];
    }
    require(den > 0.0, "sorted_nse: truth has zero norm");
    return num / den;
}

double sorted_nse(std::vector<cplx> est, std::vector<cplx> truth) {
    require(est.size() == truth.size() && !est.empty(), "sorted_nse: length mismatch");
    auto by_mag = [](const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); };
    std::stable_sort(est.begin(), est.end(), by_mag);
    std::stable_sort(truth.begin(), truth.end(), by_mag);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        num += std::norm(est[k] - truth[k]);
        den += std::norm(truth[k]);
    }
    require(den > 0.0, "sorted_nse: truth has zero norm");
    return num / den;
}

ParamNse channel_param_nse(const ExtractedParams& est, const ChannelParams& truth) {
    require(est.beta.size() == truth.rank(), "channel_param_nse: rank mismatch");
    ParamNse p;
    p.theta1 = sorted_nse(est.theta1, truth.theta1);
    p.theta2 = sorted_nse(est.theta2, truth.theta2);
    p.tau = sorted_nse(est.tau_ns, truth.tau_ns);
    p.gain = sorted_nse(est.beta, truth.beta);
    return p;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<CdfPoint> out;
    const double n = static_cast<double>(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k + 1 < values.size() && values[k + 1] == values[k]) continue;
        out.push_back({values[k], static_cast<double>(k + 1) / n});
    }
    return out;
}

}  // namespace dlcp
