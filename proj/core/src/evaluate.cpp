// SPDX-License-Identifier: Apache-2.0
#include "dlcp/evaluate.hpp"

#include "dlcp/channel.hpp"
#include "dlcp/parallel.hpp"

namespace dlcp {

std::vector<ComplexMatrix> truth_init(const Sample& s, const DatasetMeta& meta) {
    if (meta.family == "synthetic") {
        const CpFactors f = synthetic_truth(s, meta);
        return {f.factors.begin() + 1, f.factors.end()};
    }
    const ChannelTruth t = channel_truth(s, meta);
    const BlockChannel bc = build_block_channel(t.params, meta.dims[0], meta.dims[1], meta.dims[2], t.m_s,
                                                meta.constants);
    return {bc.factors.factors.begin() + 1, bc.factors.factors.end()};
}

std::vector<SampleRun> run_dataset(const Dataset& ds, const EvalConfig& cfg) {
    require(cfg.rank >= 1, "eval: rank must be >= 1");
    if (cfg.truth_init)
        require(ds.meta.has_params && cfg.rank == ds.meta.rank, "eval: truth init needs ground-truth factors of the same rank");
    if (cfg.init.method == InitMethod::Learned) {
        require(cfg.init.model != nullptr, "eval: learned init needs a model");
        require(cfg.init.model->arch.dims == ds.meta.dims && cfg.init.model->arch.rank == cfg.rank,
                "eval: model shape does not match the dataset and rank");
    }
    AlsConfig als;
    als.rank = cfg.rank;
    als.iterations = cfg.iterations;
    std::vector<SampleRun> out(ds.samples.size());
    parallel_for(ds.samples.size(), cfg.threads, [&](std::size_t k) {
        const Sample& s = ds.samples[k];
        SampleRun& run = out[k];
        std::vector<ComplexMatrix> init;
        if (cfg.truth_init) {
            init = truth_init(s, ds.meta);
        } else if (cfg.init.method == InitMethod::Svd) {
            SvdInit si = svd_init(s.noisy, cfg.rank);
            init = std::move(si.factors);
            run.degenerate_init = si.degenerate;
        } else {
            init = make_init(s.noisy, cfg.rank, cfg.init, k);
        }
        AlsResult res = cpals(s.noisy, init, als, ds.meta.has_clean ? &s.clean : nullptr);
        run.trace = std::move(res.trace);
        run.factors = std::move(res.factors);
    });
    return out;
}

Curves summarize(std::span<const SampleRun> runs) {
    require(!runs.empty(), "summarize: no samples");
    Curves c;
    const std::size_t len = runs.front().trace.objective.size();
    const bool with_nse = !runs.front().trace.nse.empty();
    c.mean_objective.assign(len, 0.0);
    if (with_nse) c.anse.assign(len, 0.0);
    for (const auto& r : runs) {
        require(r.trace.objective.size() == len, "summarize: traces differ in length");
        for (std::size_t k = 0; k < len; ++k) {
            c.mean_objective[k] += r.trace.objective[k];
            if (with_nse) c.anse[k] += r.trace.nse[k];
        }
    }
    const double n = static_cast<double>(runs.size());
    for (auto& v : c.mean_objective) v /= n;
    for (auto& v : c.anse) v /= n;
    return c;
}

std::optional<std::size_t> first_reaching(std::span<const double> curve, double target) {
    for (std::size_t k = 0; k < curve.size(); ++k)
        if (curve[k] <= target) return k;
    return std::nullopt;
}

}  // namespace dlcp
