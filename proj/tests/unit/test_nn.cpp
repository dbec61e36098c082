// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>

#include "dlcp/initializers.hpp"
#include "dlcp/mlp.hpp"
#include "dlcp/train.hpp"
#include "dlcp/unrolled.hpp"
#include "gradcheck.hpp"

using namespace dlcp;
using dlcp::testing::random_tensor;

namespace {

MlpArch small_arch(bool is_complex = true) {
    MlpArch a;
    a.dims = {4, 4, 4};
    a.rank = 2;
    a.hidden = 8;
    a.layers = 1;
    a.is_complex = is_complex;
    return a;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("dlcp_test_nn_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(Pack, RoundTripAndLayout) {
    const ComplexTensor y({2, 1}, {cplx(1, 3), cplx(2, 4)});
    const RealMatrix x = pack_input(y);
    EXPECT_EQ(x, RealMatrix(4, 1, {1.0, 2.0, 3.0, 4.0}));
    EXPECT_EQ(pack_input(y, false), RealMatrix(2, 1, {1.0, 2.0}));

    // dims (2,2,2), R=2: output 2·2·(2+2) = 16 entries per mode pair
    RealMatrix v(16, 1);
    for (std::size_t k = 0; k < 16; ++k) v[k] = static_cast<double>(k);
    const auto f = unpack_output(v, {2, 2, 2}, 2);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0](1, 0), cplx(1.0, 5.0));
    EXPECT_EQ(f[0](0, 1), cplx(2.0, 6.0));
    EXPECT_EQ(f[1](0, 0), cplx(8.0, 12.0));
    EXPECT_EQ(f[1](1, 1), cplx(11.0, 15.0));
}

TEST(Pack, ConsumesExactlyOutputDim) {
    // dims (6,2,2), R=4: A_2, A_3 each 2×4 → 2·(8+8) = 32 reals
    MlpArch a;
    a.dims = {6, 2, 2};
    a.rank = 4;
    EXPECT_EQ(a.output_dim(), 32u);
    EXPECT_NO_THROW(unpack_output(RealMatrix(32, 1), a.dims, 4));
    EXPECT_THROW(unpack_output(RealMatrix(31, 1), a.dims, 4), ValidationError);
    EXPECT_THROW(unpack_output(RealMatrix(33, 1), a.dims, 4), ValidationError);
}

TEST(ParamCount, ReferenceConfigurations) {
    MlpArch syn;
    syn.dims = {6, 6, 6};
    syn.rank = 3;
    syn.hidden = 512;
    syn.layers = 4;
    syn.is_complex = false;
    EXPECT_EQ(param_count(syn), 917540u);
    EXPECT_EQ(MlpModel::zeros(syn).num_parameters(), 917540u);

    MlpArch ch;
    ch.dims = {32, 8, 4};
    ch.rank = 4;
    ch.hidden = 512;
    ch.layers = 4;
    EXPECT_EQ(param_count(ch), 1886304u);

    MlpArch tiny;
    tiny.dims = {1, 1};
    tiny.rank = 1;
    tiny.hidden = 1;
    tiny.layers = 1;
    tiny.is_complex = false;
    EXPECT_EQ(tiny.input_dim(), 1u);
    EXPECT_EQ(tiny.output_dim(), 1u);
    EXPECT_EQ(param_count(tiny), 4u);
    tiny.layers = 2;
    EXPECT_EQ(param_count(tiny), 6u);
}

TEST(Mlp, ZeroModelOutputsZero) {
    const MlpArch a = small_arch();
    Rng rng = make_stream(81);
    const RealMatrix out = mlp_infer(MlpModel::zeros(a), pack_input(random_tensor(a.dims, rng)));
    ASSERT_EQ(out.size(), a.output_dim());
    for (auto v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(Mlp, RecordedForwardMatchesInferenceWithoutDropout) {
    MlpArch a = small_arch();
    a.layers = 3;
    const MlpModel m = MlpModel::create(a, 4);
    Rng rng = make_stream(82);
    const RealMatrix x = pack_input(random_tensor(a.dims, rng));
    ad::Tape t;
    const MlpVars vars = bind_parameters(t, m);
    const ad::RVar out = mlp_forward(t, m, vars, t.leaf(x), {});
    EXPECT_EQ(t.value(out), mlp_infer(m, x));
    a.dropout = 0.0;
    EXPECT_TRUE(dropout_masks(a, rng).empty());
}

TEST(Mlp, DropoutMasksAreInverted) {
    MlpArch a = small_arch();
    a.hidden = 4000;
    a.layers = 2;
    a.dropout = 0.25;
    Rng rng = make_stream(83);
    const auto masks = dropout_masks(a, rng);
    ASSERT_EQ(masks.size(), 2u);
    double mean = 0.0;
    for (auto v : masks[0].data()) {
        EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-15);
        mean += v;
    }
    EXPECT_NEAR(mean / 4000.0, 1.0, 0.05);
}

TEST(Mlp, GlorotInitDeterministicAndBounded) {
    const MlpArch a = small_arch();
    const MlpModel m1 = MlpModel::create(a, 9), m2 = MlpModel::create(a, 9), m3 = MlpModel::create(a, 10);
    EXPECT_EQ(m1.weights, m2.weights);
    EXPECT_NE(m1.weights, m3.weights);
    for (const auto& w : m1.weights) {
        const double lim = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        for (auto v : w.data()) EXPECT_LE(std::abs(v), lim);
    }
    for (const auto& b : m1.biases)
        for (auto v : b.data()) EXPECT_EQ(v, 0.0);
}

TEST(Mlp, FlopAccounting) {
    MlpArch ch;
    ch.dims = {32, 8, 4};
    ch.rank = 4;
    ch.hidden = 512;
    ch.layers = 4;
    std::uint64_t macs = 0, adds = 0;
    for (const auto& f : mlp_flops(ch)) {
        EXPECT_EQ(f.macs, f.in * f.out);
        macs += f.macs;
        adds += f.bias_adds;
    }
    EXPECT_EQ(macs, 2048u * 512u + 3u * 512u * 512u + 512u * 96u);
    EXPECT_EQ(macs + adds, param_count(ch));
}

TEST(Unrolled, LossEqualsSolverObjective) {
    const MlpArch a = small_arch();
    const MlpModel m = MlpModel::create(a, 5);
    Rng rng = make_stream(84);
    for (std::size_t k : {0u, 1u, 3u}) {
        const ComplexTensor y = random_tensor(a.dims, rng);
        const LossGrad lg = unrolled_loss(m, y, k, {}, false);
        AlsConfig cfg;
        cfg.rank = a.rank;
        cfg.iterations = k;
        const AlsResult res = cpals(y, learned_init(m, y), cfg);
        EXPECT_NEAR(lg.loss, res.trace.objective.back(), 1e-12 * std::max(1.0, lg.loss));
    }
}

TEST(Unrolled, MoreSweepsNeverIncreaseLoss) {
    const MlpArch a = small_arch();
    const MlpModel m = MlpModel::create(a, 6);
    Rng rng = make_stream(85);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexTensor y = random_tensor(a.dims, rng);
        const double l0 = unrolled_loss(m, y, 0, {}, false).loss;
        const double l2 = unrolled_loss(m, y, 2, {}, false).loss;
        EXPECT_LE(l2, l0 * (1.0 + 1e-10));
    }
}

TEST(Unrolled, ZeroModelOnZeroTensor) {
    const MlpArch a = small_arch();
    const LossGrad lg = unrolled_loss(MlpModel::zeros(a), ComplexTensor(a.dims), 1, {}, true);
    EXPECT_EQ(lg.loss, 0.0);
    for (const auto& g : lg.grad_w)
        for (auto v : g.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Unrolled, GradientMatchesCentralDifferences) {
    const MlpArch a = small_arch();
    Rng rng = make_stream(86);
    for (std::uint64_t seed : {1u, 2u}) {
        const MlpModel m = MlpModel::create(a, seed);
        const ComplexTensor y = random_tensor(a.dims, rng);
        EXPECT_LT(dlcp::testing::unrolled_fd_error(m, y, 1), 1e-5);
    }
}

TEST(Unrolled, GradientMatchesCentralDifferencesRealData) {
    const MlpArch a = small_arch(false);
    Rng rng = make_stream(87);
    ComplexTensor y = random_tensor(a.dims, rng);
    for (auto& v : y.data()) v = v.real();
    EXPECT_LT(dlcp::testing::unrolled_fd_error(MlpModel::create(a, 3), y, 1), 1e-5);
}

TEST(AnalyticJacobian, MatchesTapeAndFiniteDifferences) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto c = dlcp::testing::analytic_check(seed);
        EXPECT_LT(c.vs_backward, 1e-8);
        EXPECT_LT(c.vs_fd, 1e-6);
    }
    const auto r1 = dlcp::testing::analytic_check(14, {3, 4, 2}, 1);
    EXPECT_LT(r1.vs_backward, 1e-8);
    EXPECT_LT(r1.vs_fd, 1e-6);
}

TEST(AnalyticJacobian, CommutationMatrixTransposes) {
    Rng rng = make_stream(88);
    const ComplexMatrix a = dlcp::testing::random_matrix(3, 4, rng);
    const ComplexMatrix k = commutation_matrix(3, 4);
    const ComplexMatrix vec_a(12, 1, a.data());
    const ComplexMatrix vec_at(12, 1, transpose(a).data());
    EXPECT_EQ(matmul(k, vec_a), vec_at);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
    std::vector<RealMatrix> p{RealMatrix(3, 1, {1.0, -2.0, 0.5})};
    const auto p0 = p;
    AdamState s = AdamState::like(p, 0.1);
    for (int i = 0; i < 5; ++i) adam_step(s, p, std::vector<RealMatrix>{RealMatrix(3, 1)});
    EXPECT_EQ(p, p0);
}

TEST(Adam, FirstStepMovesByLearningRate) {
    std::vector<RealMatrix> p{RealMatrix(2, 1, {1.0, 1.0})};
    AdamState s = AdamState::like(p, 0.01);
    adam_step(s, p, std::vector<RealMatrix>{RealMatrix(2, 1, {3.0, -0.002})});
    // m̂ = g, v̂ = g² after bias correction
    EXPECT_NEAR(p[0][0], 1.0 - 0.01 * 3.0 / (3.0 + 1e-8), 1e-15);
    EXPECT_NEAR(p[0][1], 1.0 + 0.01 * 0.002 / (0.002 + 1e-8), 1e-15);
}

TEST(Adam, ConstantGradientStepStaysNearLearningRate) {
    std::vector<RealMatrix> p{RealMatrix(1, 1, {0.0})};
    AdamState s = AdamState::like(p, 0.001);
    for (int i = 0; i < 1000; ++i) adam_step(s, p, std::vector<RealMatrix>{RealMatrix(1, 1, {0.7})});
    EXPECT_NEAR(p[0][0], -1.0, 1e-6);
}

TEST(Train, ZeroLearningRateKeepsModel) {
    const MlpArch a = small_arch();
    MlpModel m = MlpModel::create(a, 7);
    const MlpModel m0 = m;
    Rng rng = make_stream(89);
    std::vector<ComplexTensor> data;
    for (int i = 0; i < 10; ++i) data.push_back(random_tensor(a.dims, rng));
    TrainConfig cfg;
    cfg.stages = parse_stages("1:0:3");
    cfg.batch = 4;
    const auto hist = train(m, data, cfg);
    ASSERT_EQ(hist.size(), 3u);
    EXPECT_EQ(m.weights, m0.weights);
    EXPECT_DOUBLE_EQ(hist[0].mean_loss, hist[2].mean_loss);
}

TEST(Train, LossDecreasesAndIsDeterministicAcrossThreads) {
    MlpArch a = small_arch();
    a.dropout = 0.1;
    Rng rng = make_stream(90);
    std::vector<ComplexTensor> data;
    for (int i = 0; i < 20; ++i) {
        std::vector<std::vector<cplx>> v(3);
        for (auto& x : v)
            for (int j = 0; j < 4; ++j) x.push_back(complex_normal(rng, 1.0));
        ComplexTensor y = outer(v);
        for (auto& e : y.data()) e += complex_normal(rng, 0.01);
        data.push_back(y);
    }
    TrainConfig cfg;
    cfg.stages = parse_stages("0:0.01:3,1:0.005:2");
    cfg.batch = 16;
    cfg.seed = 3;
    MlpModel m1 = MlpModel::create(a, 1), m2 = m1;
    const auto h1 = train(m1, data, cfg);
    cfg.threads = 3;
    const auto h2 = train(m2, data, cfg);
    EXPECT_EQ(m1.weights, m2.weights);
    EXPECT_EQ(m1.biases, m2.biases);
    ASSERT_EQ(h1.size(), 5u);
    EXPECT_EQ(h1.back().stage, 2u);
    EXPECT_LT(h1[2].mean_loss, h1[0].mean_loss);
    for (std::size_t e = 0; e < h1.size(); ++e) EXPECT_EQ(h1[e].mean_loss, h2[e].mean_loss);
}

TEST(Train, RejectsShapeMismatch) {
    MlpModel m = MlpModel::create(small_arch(), 1);
    std::vector<ComplexTensor> data{ComplexTensor({4, 4, 3})};
    TrainConfig cfg;
    cfg.stages = parse_stages("1:0.001:1");
    EXPECT_THROW(train(m, data, cfg), ValidationError);
}

TEST(Stages, Parsing) {
    const auto s = parse_stages("0:1e-3:20,2:5e-4:10");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].k, 0u);
    EXPECT_DOUBLE_EQ(s[0].lr, 1e-3);
    EXPECT_EQ(s[1].epochs, 10u);
    for (const char* bad : {"", "1:2", "x:1:1", "1:1:0", "-1:1:1", "1:nan:1", "1:-1:1"})
        EXPECT_THROW(parse_stages(bad), ValidationError) << bad;
}

TEST(ModelIo, SaveLoadRoundTrip) {
    MlpArch a = small_arch();
    a.dropout = 0.2;
    const MlpModel m = MlpModel::create(a, 12);
    const auto dir = scratch("roundtrip");
    save_model(m, dir);
    const MlpModel r = load_model(dir);
    EXPECT_EQ(r.arch.dims, a.dims);
    EXPECT_EQ(r.arch.hidden, a.hidden);
    EXPECT_EQ(r.arch.dropout, a.dropout);
    EXPECT_EQ(r.weights, m.weights);
    EXPECT_EQ(r.biases, m.biases);

    std::filesystem::resize_file(dir / "weights.bin", std::filesystem::file_size(dir / "weights.bin") - 8);
    EXPECT_THROW(load_model(dir), IoError);
    EXPECT_THROW(load_model(scratch("missing")), IoError);
}
