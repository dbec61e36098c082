// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <map>
#include <optional>

#include "command.hpp"
#include "dlcp/binary_io.hpp"
#include "dlcp/evaluate.hpp"
#include "dlcp/metrics.hpp"
#include "dlcp/mmse.hpp"

namespace dlcp::cli {

namespace {

struct InitOpts {
    std::string init = "random";
    std::string model;
    std::uint64_t seed = 0;
};

void add_init_options(CLI::App* app, InitOpts& o) {
    app->add_option("--init", o.init, "Initializer")
        ->check(CLI::IsMember({"random", "svd", "dl", "learned", "truth"}))
        ->capture_default_str();
    app->add_option("--model", o.model, "Trained model directory (required for --init dl)");
    app->add_option("--seed", o.seed, "Seed of the random initializer")->capture_default_str();
}

/// Resolves --init/--model into an EvalConfig; `model` keeps the loaded network alive.
EvalConfig make_eval_config(const InitOpts& o, const DatasetMeta& meta, std::size_t rank,
                            std::optional<MlpModel>& model) {
    EvalConfig cfg;
    cfg.rank = rank ? rank : meta.rank;
    cfg.truth_init = o.init == "truth";
    cfg.init.method = cfg.truth_init ? InitMethod::Random : parse_init_method(o.init);
    cfg.init.seed = o.seed;
    cfg.init.is_complex = meta.is_complex;
    const bool learned = cfg.init.method == InitMethod::Learned && !cfg.truth_init;
    require(learned == !o.model.empty(), "--model is required with --init dl and not accepted otherwise");
    if (learned) {
        model = load_model(o.model);
        cfg.init.model = &*model;
    }
    return cfg;
}

nlohmann::json init_config(const InitOpts& o) {
    nlohmann::json j = {{"init", o.init}, {"seed", o.seed}};
    if (!o.model.empty()) j["model"] = o.model;
    return j;
}

Dataset load_subset(const std::string& dir, std::size_t sample) {
    Dataset ds = load_dataset(dir);
    require(sample < ds.samples.size(), "--sample out of range");
    Sample s = std::move(ds.samples[sample]);
    ds.samples = {std::move(s)};
    ds.meta.count = 1;
    ds.meta.sample_snr_db = {ds.meta.sample_snr_db[sample]};
    return ds;
}

// ---- decompose --------------------------------------------------------------

struct DecomposeOpts {
    std::string input;
    std::size_t sample = 0;
    std::size_t rank = 0;
    std::size_t iters = 10;
    InitOpts init;
};

Command make_decompose(CLI::App& app) {
    auto o = std::make_shared<DecomposeOpts>();
    Command c;
    c.app = app.add_subcommand("decompose", "Initialize and run CP-ALS on one tensor");
    c.app->add_option("--input", o->input, "Dataset directory")->required();
    c.app->add_option("--sample", o->sample, "Sample index within the dataset")->capture_default_str();
    c.app->add_option("--rank", o->rank, "CP rank (default: the dataset rank)");
    c.app->add_option("--iters", o->iters, "Number of ALS sweeps K")->capture_default_str();
    add_init_options(c.app, o->init);
    add_common_options(c, true, ",--trace-out");
    c.run = [o](RunContext& ctx) {
        Dataset ds = load_subset(o->input, o->sample);
        // keep the random stream keyed by the original sample index
        std::optional<MlpModel> model;
        EvalConfig cfg = make_eval_config(o->init, ds.meta, o->rank, model);
        cfg.iterations = o->iters;
        std::vector<ComplexMatrix> init;
        const Sample& s = ds.samples[0];
        if (cfg.truth_init)
            init = truth_init(s, ds.meta);
        else
            init = make_init(s.noisy, cfg.rank, cfg.init, o->sample);
        AlsConfig als;
        als.rank = cfg.rank;
        als.iterations = cfg.iterations;
        const AlsResult res = cpals(s.noisy, init, als, ds.meta.has_clean ? &s.clean : nullptr);

        ensure_dir(ctx.out);
        save_factors(res.factors, ctx.out / "factors.bin");
        ctx.outputs.push_back("factors.bin");
        const bool with_nse = !res.trace.nse.empty();
        std::vector<std::string> header{"iter", "objective"};
        if (with_nse) header.push_back("nse");
        CsvWriter csv(ctx, "trace.csv", header);
        for (std::size_t k = 0; k < res.trace.objective.size(); ++k) {
            std::vector<std::string> row{std::to_string(k), num(res.trace.objective[k])};
            if (with_nse) row.push_back(num(res.trace.nse[k]));
            csv.row(row);
        }
        csv.close();
        if (res.trace.regularized_solves)
            std::cerr << "note: " << res.trace.regularized_solves << " regularized solves\n";
        ctx.config = {{"input", o->input}, {"sample", o->sample}, {"rank", cfg.rank}, {"iters", o->iters},
                      {"init", init_config(o->init)}, {"regularized_solves", res.trace.regularized_solves}};
        ctx.seeds["init_seed"] = o->init.seed;
        ctx.inputs.push_back(o->input);
        if (!o->init.model.empty()) ctx.inputs.push_back(o->init.model);
    };
    return c;
}

// ---- eval -------------------------------------------------------------------

struct EvalOpts {
    std::string data;
    std::size_t rank = 0;
    std::size_t iters = 50;
    InitOpts init;
    std::string mmse_train;
};

void write_channel_metrics(RunContext& ctx, const Dataset& ds, const std::vector<SampleRun>& runs,
                           const std::optional<MmseEstimator>& mmse) {
    struct Acc {
        std::size_t n = 0;
        double cp = 0.0, coarse = 0.0, mmse = 0.0;
        ParamNse p;
    };
    std::map<double, Acc> by_snr;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const Sample& s = ds.samples[k];
        Acc& a = by_snr[ds.meta.sample_snr_db[k]];
        ++a.n;
        a.cp += runs[k].trace.nse.back();
        a.coarse += nse(s.noisy, s.clean);
        if (mmse) a.mmse += nse(mmse->estimate(s.noisy, sample_sigma2(ds, k)), s.clean);
        if (ds.meta.has_params) {
            const ChannelTruth t = channel_truth(s, ds.meta);
            const ParamNse e = channel_param_nse(extract_channel_params(runs[k].factors, t.m_s, ds.meta.constants),
                                                 t.params);
            a.p.theta1 += e.theta1;
            a.p.theta2 += e.theta2;
            a.p.tau += e.tau;
            a.p.gain += e.gain;
        }
    }
    std::vector<std::string> header{"snr_db", "count", "anse_cpals", "anse_coarse"};
    if (mmse) header.push_back("anse_mmse");
    CsvWriter csv(ctx, "snr.csv", header);
    for (const auto& [snr, a] : by_snr) {
        const double n = static_cast<double>(a.n);
        std::vector<std::string> row{num(snr), std::to_string(a.n), num(a.cp / n), num(a.coarse / n)};
        if (mmse) row.push_back(num(a.mmse / n));
        csv.row(row);
    }
    csv.close();
    if (!ds.meta.has_params) return;
    CsvWriter pc(ctx, "params_snr.csv", {"snr_db", "count", "theta1_anse", "theta2_anse", "tau_anse", "gain_anse"});
    for (const auto& [snr, a] : by_snr) {
        const double n = static_cast<double>(a.n);
        pc.row({num(snr), std::to_string(a.n), num(a.p.theta1 / n), num(a.p.theta2 / n), num(a.p.tau / n),
                num(a.p.gain / n)});
    }
    pc.close();
}

Command make_eval(CLI::App& app) {
    auto o = std::make_shared<EvalOpts>();
    Command c;
    c.app = app.add_subcommand("eval", "Objective/ANSE curves, NSE CDF and per-SNR metrics over a dataset");
    c.app->add_option("--data", o->data, "Test dataset directory")->required();
    c.app->add_option("--rank", o->rank, "CP rank (default: the dataset rank)");
    c.app->add_option("--iters", o->iters, "Number of ALS sweeps K")->capture_default_str();
    add_init_options(c.app, o->init);
    c.app->add_option("--mmse-train", o->mmse_train, "Channel dataset used to fit the MMSE baseline");
    add_common_options(c, true, ",--metrics-out");
    c.run = [o, threads = c.threads](RunContext& ctx) {
        const Dataset ds = load_dataset(o->data);
        require(ds.meta.has_clean, "eval: dataset has no clean tensors for NSE metrics");
        std::optional<MlpModel> model;
        EvalConfig cfg = make_eval_config(o->init, ds.meta, o->rank, model);
        cfg.iterations = o->iters;
        cfg.threads = *threads;
        std::optional<MmseEstimator> mmse;
        if (!o->mmse_train.empty()) {
            require(ds.meta.family == "channel", "--mmse-train applies to channel datasets");
            const Dataset tr = load_dataset(o->mmse_train);
            std::vector<ComplexTensor> coarse;
            std::vector<double> s2;
            for (std::size_t k = 0; k < tr.samples.size(); ++k) {
                coarse.push_back(tr.samples[k].noisy);
                s2.push_back(sample_sigma2(tr, k));
            }
            mmse.emplace(coarse, s2);
            ctx.inputs.push_back(o->mmse_train);
        }

        const std::vector<SampleRun> runs = run_dataset(ds, cfg);
        const Curves cv = summarize(runs);

        ensure_dir(ctx.out);
        {
            CsvWriter csv(ctx, "curve.csv", {"iter", "mean_objective", "anse"});
            for (std::size_t k = 0; k < cv.mean_objective.size(); ++k)
                csv.row({std::to_string(k), num(cv.mean_objective[k]), num(cv.anse[k])});
            csv.close();
        }
        std::vector<double> final_nse;
        {
            CsvWriter csv(ctx, "per_sample.csv", {"sample", "snr_db", "final_objective", "final_nse"});
            for (std::size_t k = 0; k < runs.size(); ++k) {
                final_nse.push_back(runs[k].trace.nse.back());
                csv.row({std::to_string(k), num(ds.meta.sample_snr_db[k]), num(runs[k].trace.objective.back()),
                         num(final_nse.back())});
            }
            csv.close();
        }
        {
            CsvWriter csv(ctx, "nse_cdf.csv", {"nse", "cdf"});
            for (const auto& p : empirical_cdf(final_nse)) csv.row({num(p.value), num(p.prob)});
            csv.close();
        }
        if (ds.meta.family == "channel") write_channel_metrics(ctx, ds, runs, mmse);

        ctx.config = {{"data", o->data}, {"rank", cfg.rank}, {"iters", o->iters}, {"init", init_config(o->init)}};
        if (!o->mmse_train.empty()) ctx.config["mmse_train"] = o->mmse_train;
        ctx.seeds["init_seed"] = o->init.seed;
        ctx.inputs.push_back(o->data);
        if (!o->init.model.empty()) ctx.inputs.push_back(o->init.model);
    };
    return c;
}

// ---- bench ------------------------------------------------------------------

struct BenchOpts {
    std::string data;
    std::size_t rank = 0;
    std::vector<double> targets{1e-1, 1e-2, 1e-3};
    std::size_t max_iters = 200;
    std::vector<std::string> inits{"random", "svd", "dl"};
    std::string model;
    std::uint64_t seed = 0;
};

Command make_bench(CLI::App& app) {
    auto o = std::make_shared<BenchOpts>();
    Command c;
    c.app = app.add_subcommand("bench", "Iterations needed by each initializer to reach ANSE targets");
    c.app->add_option("--data", o->data, "Test dataset directory")->required();
    c.app->add_option("--rank", o->rank, "CP rank (default: the dataset rank)");
    c.app->add_option("--anse-targets", o->targets, "ANSE targets, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    c.app->add_option("--max-iters", o->max_iters, "Largest K tried")->capture_default_str();
    c.app->add_option("--inits", o->inits, "Initializers, comma separated")
        ->delimiter(',')
        ->check(CLI::IsMember({"random", "svd", "dl", "learned", "truth"}))
        ->capture_default_str();
    c.app->add_option("--model", o->model, "Trained model directory (for dl)");
    c.app->add_option("--seed", o->seed, "Seed of the random initializer")->capture_default_str();
    add_common_options(c, true);
    c.run = [o, threads = c.threads](RunContext& ctx) {
        const Dataset ds = load_dataset(o->data);
        require(ds.meta.has_clean, "bench: dataset has no clean tensors for ANSE");
        require(!o->targets.empty() && !o->inits.empty(), "bench: need targets and initializers");
        std::vector<std::pair<std::string, Curves>> curves;
        for (const auto& name : o->inits) {
            InitOpts io;
            io.init = name;
            io.seed = o->seed;
            const bool learned = name == "dl" || name == "learned";
            if (learned) io.model = o->model;
            std::optional<MlpModel> model;
            EvalConfig cfg = make_eval_config(io, ds.meta, o->rank, model);
            cfg.iterations = o->max_iters;
            cfg.threads = *threads;
            curves.emplace_back(name, summarize(run_dataset(ds, cfg)));
        }
        ensure_dir(ctx.out);
        {
            CsvWriter csv(ctx, "bench.csv", {"init", "anse_target", "iters_or_fail"});
            for (const auto& [name, cv] : curves)
                for (double t : o->targets) {
                    const auto k = first_reaching(cv.anse, t);
                    csv.row({name, num(t), k ? std::to_string(*k) : std::string("fail")});
                }
            csv.close();
        }
        {
            CsvWriter csv(ctx, "curves.csv", {"init", "iter", "anse", "mean_objective"});
            for (const auto& [name, cv] : curves)
                for (std::size_t k = 0; k < cv.anse.size(); ++k)
                    csv.row({name, std::to_string(k), num(cv.anse[k]), num(cv.mean_objective[k])});
            csv.close();
        }
        ctx.config = {{"data", o->data},       {"rank", o->rank ? o->rank : ds.meta.rank},
                      {"anse_targets", o->targets}, {"max_iters", o->max_iters},
                      {"inits", o->inits},     {"seed", o->seed}};
        if (!o->model.empty()) ctx.config["model"] = o->model;
        ctx.seeds["init_seed"] = o->seed;
        ctx.inputs.push_back(o->data);
        if (!o->model.empty()) ctx.inputs.push_back(o->model);
    };
    return c;
}

}  // namespace

std::vector<Command> register_solve(CLI::App& app) {
    std::vector<Command> out;
    out.push_back(make_decompose(app));
    out.push_back(make_eval(app));
    out.push_back(make_bench(app));
    return out;
}

}  // namespace dlcp::cli
