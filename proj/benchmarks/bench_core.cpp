// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "dlcp/als.hpp"
#include "dlcp/channel.hpp"
#include "dlcp/cp_model.hpp"
#include "dlcp/initializers.hpp"
#include "dlcp/linalg.hpp"
#include "dlcp/mlp.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/unrolled.hpp"

using namespace dlcp;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    ComplexMatrix m(r, c);
    for (auto& v : m.data()) v = complex_normal(rng, 1.0);
    return m;
}

ComplexTensor channel_tensor(std::uint64_t seed) {
    Rng rng = make_stream(seed);
    return build_block_channel(gen_params(4, rng), 32, 8, 4, 1).h;
}

void BM_KhatriRao(benchmark::State& st) {
    Rng rng = make_stream(1);
    const auto n = static_cast<std::size_t>(st.range(0));
    const ComplexMatrix a = random_matrix(n, 4, rng), b = random_matrix(n, 4, rng);
    for (auto _ : st) benchmark::DoNotOptimize(khatri_rao(a, b));
}
BENCHMARK(BM_KhatriRao)->Arg(8)->Arg(32)->Arg(128);

void BM_AlsStep(benchmark::State& st) {
    const ComplexTensor y = channel_tensor(2);
    Rng rng = make_stream(3);
    std::vector<ComplexMatrix> f{random_matrix(32, 4, rng), random_matrix(8, 4, rng), random_matrix(4, 4, rng)};
    const Unfoldings unf(y);
    const auto mode = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(als_step(unf[mode], f, mode));
}
BENCHMARK(BM_AlsStep)->DenseRange(0, 2);

void BM_Cpals(benchmark::State& st) {
    const ComplexTensor y = channel_tensor(4);
    InitSpec spec;
    const auto init = make_init(y, 4, spec);
    AlsConfig cfg;
    cfg.rank = 4;
    cfg.iterations = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(cpals(y, init, cfg));
}
BENCHMARK(BM_Cpals)->Arg(10)->Arg(50);

void BM_SvdInit(benchmark::State& st) {
    const ComplexTensor y = channel_tensor(5);
    for (auto _ : st) benchmark::DoNotOptimize(svd_init(y, 4));
}
BENCHMARK(BM_SvdInit);

void BM_LeadingEigvecs(benchmark::State& st) {
    Rng rng = make_stream(6);
    const auto n = static_cast<std::size_t>(st.range(0));
    const ComplexMatrix a = random_matrix(n, n, rng);
    const ComplexMatrix h = matmul_ah_b(a, a);
    for (auto _ : st) benchmark::DoNotOptimize(leading_eigvecs(h, 4));
}
BENCHMARK(BM_LeadingEigvecs)->Arg(8)->Arg(32);

void BM_UnrolledLoss(benchmark::State& st) {
    MlpArch arch;
    arch.dims = {6, 6, 6};
    arch.rank = 3;
    arch.hidden = 64;
    arch.layers = 2;
    arch.is_complex = false;
    const MlpModel model = MlpModel::create(arch, 7);
    Rng rng = make_stream(8);
    ComplexTensor y(arch.dims);
    for (auto& v : y.data()) v = uniform(rng, 0.0, 1.0);
    const auto k = static_cast<std::size_t>(st.range(0));
    const bool grad = st.range(1) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(unrolled_loss(model, y, k, {}, grad));
}
BENCHMARK(BM_UnrolledLoss)->Args({2, 0})->Args({2, 1})->Args({5, 1});

void BM_ExtractGeneratingVector(benchmark::State& st) {
    const std::vector<double> z{0.7};
    const ComplexMatrix v = vandermonde(z, 32);
    for (auto _ : st) benchmark::DoNotOptimize(extract_generating_vector(v.data()));
}
BENCHMARK(BM_ExtractGeneratingVector);

}  // namespace

BENCHMARK_MAIN();
