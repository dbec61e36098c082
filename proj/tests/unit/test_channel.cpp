// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "dlcp/als.hpp"
#include "dlcp/channel.hpp"
#include "dlcp/dataset.hpp"
#include "dlcp/metrics.hpp"
#include "dlcp/mmse.hpp"
#include "oracles.hpp"

using namespace dlcp;
using dlcp::testing::random_tensor;
using dlcp::testing::rel_diff;
using dlcp::testing::tensor_at;
using std::numbers::pi;

namespace {

ChannelParams one_path(double t1, double t2, double tau, cplx beta) {
    ChannelParams p;
    p.theta1 = {t1};
    p.theta2 = {t2};
    p.tau_ns = {tau};
    p.beta = {beta};
    return p;
}

}  // namespace

TEST(GenParams, DeterministicAndInRange) {
    Rng a = make_stream(101), b = make_stream(101);
    const ChannelParams p = gen_params(4, a), q = gen_params(4, b);
    EXPECT_EQ(p.theta1, q.theta1);
    EXPECT_EQ(p.beta, q.beta);
    for (std::size_t r = 0; r < 4; ++r) {
        EXPECT_LE(std::abs(p.theta1[r]), pi);
        EXPECT_LE(std::abs(p.theta2[r]), pi);
        EXPECT_GE(p.tau_ns[r], 0.0);
        EXPECT_LT(p.tau_ns[r], 100.0);
    }
}

TEST(GenParams, Moments) {
    Rng rng = make_stream(102);
    const std::size_t n = 200000;
    const ChannelParams p = gen_params(n, rng);
    double tau = 0.0, pw = 0.0, s2 = 0.0;
    cplx mean{};
    for (std::size_t r = 0; r < n; ++r) {
        tau += p.tau_ns[r];
        pw += std::norm(p.beta[r]);
        mean += p.beta[r];
        s2 += p.theta1[r] * p.theta1[r];
    }
    EXPECT_NEAR(tau / n, 50.0, 0.5);
    EXPECT_NEAR(pw / n, 1.0, 0.01);
    EXPECT_LT(std::abs(mean / static_cast<double>(n)), 0.01);
    // E[(π sin u)²] = π²/2 for u ~ U(−π/2, π/2)
    EXPECT_NEAR(s2 / n, pi * pi / 2.0, 0.03);
}

TEST(BlockChannel, TrivialPathIsAllOnes) {
    const BlockChannel bc = build_block_channel(one_path(0, 0, 0, 1.0), 3, 5, 4, 1);
    for (auto v : bc.h.data()) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-15);
}

TEST(BlockChannel, DelayGeneratorReference) {
    EXPECT_NEAR(delay_generator(100.0), 2.0 * pi * 0.25, 1e-15);
    EXPECT_EQ(delay_generator(0.0), 0.0);
}

TEST(BlockChannel, ElementwiseDefinition) {
    Rng rng = make_stream(103);
    const ChannelParams p = gen_params(3, rng);
    const std::size_t m_s = 17;
    const BlockChannel bc = build_block_channel(p, 4, 6, 5, m_s);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 5; ++k) {
                cplx s{};
                for (std::size_t r = 0; r < 3; ++r) {
                    const double z3 = 2.0 * pi * p.tau_ns[r] * 1e-9 * 0.32e9 / 128.0;
                    s += p.beta[r] * std::polar(1.0, -p.theta1[r] * i - p.theta2[r] * j - z3 * (m_s + k));
                }
                EXPECT_NEAR(std::abs(tensor_at(bc.h, {i, j, k}) - s), 0.0, 1e-12);
            }
    EXPECT_THROW(build_block_channel(p, 4, 6, 5, 125), ValidationError);
    EXPECT_THROW(build_block_channel(p, 4, 6, 5, 0), ValidationError);
}

TEST(Pilots, DftIsUnitaryAndCoarseInvertsNoiseless) {
    for (std::size_t n : {1u, 4u, 7u}) {
        const ComplexMatrix f = dft_matrix(n);
        EXPECT_LT(max_rel_diff(matmul_ah_b(f, f), ComplexMatrix::identity(n)), 1e-13);
    }
    Rng rng = make_stream(104);
    const ComplexTensor h = random_tensor({4, 8, 3}, rng);
    const PilotConfig pc = PilotConfig::dft(4, 8, 0.0);
    EXPECT_LT(rel_diff(coarse_estimate(received_signal(h, pc, rng), pc), h), 1e-13);
}

TEST(Pilots, RejectsBadConfiguration) {
    PilotConfig pc = PilotConfig::dft(4, 4, 0.0);
    pc.x[1] = 2.0;
    EXPECT_THROW(pc.validate(), ValidationError);
    pc = PilotConfig::dft(4, 4, 0.0);
    pc.f1(0, 0) *= 2.0;
    EXPECT_THROW(pc.validate(), ValidationError);
}

TEST(Pilots, CoarseIsLinear) {
    Rng rng = make_stream(105);
    const PilotConfig pc = PilotConfig::dft(3, 5, 0.0);
    const ComplexTensor a = random_tensor({3, 5, 2}, rng), b = random_tensor({3, 5, 2}, rng);
    const cplx s(0.3, -1.2);
    EXPECT_LT(rel_diff(coarse_estimate(a * s + b, pc), coarse_estimate(a, pc) * s + coarse_estimate(b, pc)), 1e-13);
}

TEST(Pilots, CoarseNoiseIsWhiteWithVarianceSigma2) {
    Rng rng = make_stream(106);
    const double sigma2 = 0.3;
    const PilotConfig pc = PilotConfig::dft(4, 8, sigma2);
    const ComplexTensor h({4, 8, 4});
    double pw = 0.0, n = 0.0;
    cplx cross{};
    for (int t = 0; t < 500; ++t) {
        const ComplexTensor e = coarse_estimate(received_signal(h, pc, rng), pc);
        for (std::size_t k = 0; k + 1 < e.size(); ++k) {
            pw += std::norm(e[k]);
            cross += e[k] * std::conj(e[k + 1]);
            n += 1.0;
        }
    }
    EXPECT_NEAR(pw / n, sigma2, 0.01);
    EXPECT_LT(std::abs(cross) / n, 0.01);
}

TEST(Snr, NoiseVarianceDefinition) {
    const ComplexTensor h({2, 2, 2}, std::vector<cplx>(8, cplx{2.0}));
    EXPECT_DOUBLE_EQ(noise_variance_for_snr(h, 0.0), 4.0);
    EXPECT_DOUBLE_EQ(noise_variance_for_snr(h, 10.0), 0.4);
    EXPECT_THROW(noise_variance_for_snr(h, std::nan("")), ValidationError);
}

TEST(Extract, ExactOnCleanVandermonde) {
    Rng rng = make_stream(107);
    for (int trial = 0; trial < 50; ++trial) {
        const double z0 = uniform(rng, -pi + 1e-3, pi);
        const double z[1] = {z0};
        const ComplexMatrix v = vandermonde(z, 8 + rng() % 25);
        EXPECT_NEAR(extract_generating_vector(v.data()), z0, 1e-10);
    }
}

TEST(Extract, ScaleAndPhaseInvariant) {
    const double z[1] = {1.234};
    ComplexMatrix v = vandermonde(z, 8);
    const double base = extract_generating_vector(v.data());
    v *= std::polar(37.0, 2.1);
    EXPECT_NEAR(extract_generating_vector(v.data()), base, 1e-10);
    EXPECT_THROW(extract_generating_vector(ComplexMatrix(4, 1).data()), ValidationError);
}

TEST(Extract, NoisyAt20dBIsClose) {
    Rng rng = make_stream(108);
    double se = 0.0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        const double z0 = uniform(rng, -2.5, 2.5);
        const double z[1] = {z0};
        ComplexMatrix v = vandermonde(z, 32);
        for (auto& x : v.data()) x += complex_normal(rng, 0.01);
        const double d = extract_generating_vector(v.data()) - z0;
        se += d * d;
    }
    // CRB-scale error for N = 32 at 20 dB is about 6/(N³·SNR) ≈ 2e-6
    EXPECT_LT(se / trials, 1e-5);
}

TEST(ChannelMetrics, ExactFactorsGiveZeroNse) {
    Rng rng = make_stream(109);
    for (int trial = 0; trial < 10; ++trial) {
        const ChannelParams p = gen_params(4, rng);
        const std::size_t m_s = 1 + rng() % 125;
        const BlockChannel bc = build_block_channel(p, 8, 32, 4, m_s);
        const ExtractedParams e = extract_channel_params(bc.factors, m_s);
        const ParamNse n = channel_param_nse(e, p);
        EXPECT_LT(n.theta1, 1e-16);
        EXPECT_LT(n.theta2, 1e-16);
        EXPECT_LT(n.tau, 1e-14);
        EXPECT_LT(n.gain, 1e-14);
    }
}

TEST(ChannelMetrics, SortedNseIgnoresOrderAndScalesByTruth) {
    EXPECT_EQ(sorted_nse(std::vector<double>{3, 1, 2}, std::vector<double>{1, 2, 3}), 0.0);
    EXPECT_DOUBLE_EQ(sorted_nse(std::vector<double>{2, 0}, std::vector<double>{1, 0}), 1.0);
    EXPECT_EQ(sorted_nse(std::vector<cplx>{cplx(0, 2), 1.0}, std::vector<cplx>{1.0, cplx(0, 2)}), 0.0);
    EXPECT_THROW(sorted_nse(std::vector<double>{1}, std::vector<double>{1, 2}), ValidationError);
}

TEST(ChannelMetrics, EmpiricalCdf) {
    const auto c = empirical_cdf({3.0, 1.0, 2.0, 2.0});
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].value, 1.0);
    EXPECT_DOUBLE_EQ(c[0].prob, 0.25);
    EXPECT_DOUBLE_EQ(c[1].prob, 0.75);
    EXPECT_DOUBLE_EQ(c[2].prob, 1.0);
}

TEST(Mmse, BeatsCoarseOnAverage) {
    ChannelGenConfig cfg;
    cfg.ms = 4;
    cfg.bs = 8;
    cfg.block = 4;
    cfg.count = 600;
    cfg.snr_set = {5.0};
    cfg.seed = 3;
    const Dataset ds = gen_channel(cfg);
    std::vector<ComplexTensor> coarse;
    std::vector<double> s2;
    for (std::size_t k = 0; k < 500; ++k) {
        coarse.push_back(ds.samples[k].noisy);
        s2.push_back(sample_sigma2(ds, k));
    }
    const MmseEstimator est(coarse, s2);
    double e_mmse = 0.0, e_coarse = 0.0;
    for (std::size_t k = 500; k < 600; ++k) {
        const auto& s = ds.samples[k];
        e_mmse += nse(est.estimate(s.noisy, sample_sigma2(ds, k)), s.clean);
        e_coarse += nse(s.noisy, s.clean);
    }
    EXPECT_LT(e_mmse, e_coarse);
    for (double l : est.eigenvalues()) EXPECT_GE(l, 0.0);
}

TEST(Mmse, NoiseFreeTrainingIsIdentityOnItsSpan) {
    Rng rng = make_stream(110);
    std::vector<ComplexTensor> data;
    for (int k = 0; k < 100; ++k) data.push_back(random_tensor({2, 2, 2}, rng));
    const std::vector<double> s2(100, 0.0);
    const MmseEstimator est(data, s2);
    EXPECT_LT(rel_diff(est.estimate(data[0], 0.0), data[0]), 1e-10);
}

TEST(GenChannel, DeterministicAndSnrOrdered) {
    ChannelGenConfig cfg;
    cfg.count = 40;
    cfg.seed = 8;
    const Dataset a = gen_channel(cfg);
    cfg.threads = 3;
    const Dataset b = gen_channel(cfg);
    for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(a.samples[k].noisy, b.samples[k].noisy);

    double lo = 0.0, hi = 0.0;
    std::size_t nlo = 0, nhi = 0;
    for (std::size_t k = 0; k < 40; ++k) {
        const double e = nse(a.samples[k].noisy, a.samples[k].clean);
        if (a.meta.sample_snr_db[k] == 5.0) lo += e, ++nlo;
        if (a.meta.sample_snr_db[k] == 25.0) hi += e, ++nhi;
    }
    ASSERT_GT(nlo, 0u);
    ASSERT_GT(nhi, 0u);
    EXPECT_GT(lo / nlo, 10.0 * hi / nhi);
}

TEST(GenChannel, ModeOrderAndTruthRoundTrip) {
    ChannelGenConfig cfg;
    cfg.count = 3;
    cfg.noise_free = true;
    cfg.seed = 2;
    for (bool bs_first : {false, true}) {
        cfg.bs_first = bs_first;
        const Dataset ds = gen_channel(cfg);
        EXPECT_EQ(ds.meta.dims, bs_first ? (Dims{32, 8, 4}) : (Dims{8, 32, 4}));
        for (const auto& s : ds.samples) {
            const ChannelTruth t = channel_truth(s, ds.meta);
            const BlockChannel bc = build_block_channel(t.params, ds.meta.dims[0], ds.meta.dims[1], 4, t.m_s);
            EXPECT_LT(rel_diff(bc.h, s.clean), 1e-12);
            EXPECT_LT(rel_diff(s.noisy, s.clean), 1e-12);
        }
    }
}
