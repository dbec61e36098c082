// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "command.hpp"
#include "dlcp/dataset.hpp"
#include "dlcp/train.hpp"

namespace dlcp::cli {

namespace {

struct TrainOpts {
    std::string data;
    std::size_t rank = 0;
    std::size_t unroll_k = 2;
    double lr = 1e-3;
    std::size_t epochs = 10;
    std::string stages;
    std::size_t batch = 128;
    double dropout = 0.0;
    std::size_t hidden = 64;
    std::size_t layers = 2;
    std::uint64_t seed = 0;
    bool quiet = false;
};

}  // namespace

std::vector<Command> register_train(CLI::App& app) {
    auto o = std::make_shared<TrainOpts>();
    Command c;
    c.app = app.add_subcommand("train", "Train the initializer network through unrolled CP-ALS");
    c.app->add_option("--data", o->data, "Training dataset directory")->required();
    c.app->add_option("--rank", o->rank, "CP rank (default: the dataset rank)");
    c.app->add_option("--unroll-k", o->unroll_k, "Unrolled sweeps when --stages is not given")->capture_default_str();
    c.app->add_option("--lr", o->lr, "Adam learning rate when --stages is not given")->capture_default_str();
    c.app->add_option("--epochs", o->epochs, "Epochs when --stages is not given")->capture_default_str();
    c.app->add_option("--stages", o->stages, "Schedule K:lr:epochs[,K:lr:epochs...]");
    c.app->add_option("--batch", o->batch, "Mini-batch size")->capture_default_str();
    c.app->add_option("--dropout", o->dropout, "Dropout rate of hidden layers")->capture_default_str();
    c.app->add_option("--hidden", o->hidden, "Units per hidden layer")->capture_default_str();
    c.app->add_option("--layers", o->layers, "Hidden layers")->capture_default_str();
    c.app->add_option("--seed", o->seed, "Seed for weights, shuffling and dropout")->capture_default_str();
    c.app->add_flag("--quiet", o->quiet, "No per-epoch progress on stderr");
    add_common_options(c, true);
    c.run = [o, threads = c.threads](RunContext& ctx) {
        const Dataset ds = load_dataset(o->data);
        MlpArch arch;
        arch.dims = ds.meta.dims;
        arch.rank = o->rank ? o->rank : ds.meta.rank;
        arch.hidden = o->hidden;
        arch.layers = o->layers;
        arch.dropout = o->dropout;
        arch.is_complex = ds.meta.is_complex;
        arch.validate();

        TrainConfig cfg;
        cfg.stages = o->stages.empty() ? std::vector<TrainStage>{{o->unroll_k, o->lr, o->epochs}}
                                       : parse_stages(o->stages);
        cfg.batch = o->batch;
        cfg.seed = o->seed;
        cfg.threads = *threads;

        std::vector<ComplexTensor> data;
        data.reserve(ds.samples.size());
        for (const auto& s : ds.samples) data.push_back(s.noisy);

        MlpModel model = MlpModel::create(arch, o->seed);
        std::vector<EpochRecord> hist = train(model, data, cfg, [&](const EpochRecord& r) {
            if (!o->quiet)
                std::cerr << "epoch " << r.epoch << " stage " << r.stage << " loss " << num(r.mean_loss)
                          << (r.failed ? " skipped " + std::to_string(r.failed) : std::string()) << "\n";
        });

        ensure_dir(ctx.out);
        save_model(model, ctx.out);
        ctx.outputs = {"model.json", "weights.bin"};
        {
            CsvWriter loss(ctx, "loss.csv", {"epoch", "mean_loss"});
            for (const auto& r : hist) loss.row({std::to_string(r.epoch), num(r.mean_loss)});
            loss.close();
        }
        {
            CsvWriter log(ctx, "train_log.csv", {"epoch", "stage", "unroll_k", "lr", "failed"});
            for (const auto& r : hist) {
                const TrainStage& st = cfg.stages[r.stage - 1];
                log.row({std::to_string(r.epoch), std::to_string(r.stage), std::to_string(st.k), num(st.lr),
                         std::to_string(r.failed)});
            }
            log.close();
        }

        nlohmann::json stages = nlohmann::json::array();
        for (const auto& st : cfg.stages) stages.push_back({{"unroll_k", st.k}, {"lr", st.lr}, {"epochs", st.epochs}});
        ctx.config = {{"data", o->data},         {"rank", arch.rank},     {"stages", stages},
                      {"batch", cfg.batch},      {"dropout", arch.dropout}, {"hidden", arch.hidden},
                      {"layers", arch.layers},   {"complex", arch.is_complex}, {"seed", o->seed},
                      {"parameters", model.num_parameters()},
                      {"optimizer", {{"name", "adam"}, {"beta1", 0.9}, {"beta2", 0.999}, {"eps", 1e-8}}}};
        ctx.seeds["seed"] = o->seed;
        ctx.inputs.push_back(o->data);
    };
    return {std::move(c)};
}

}  // namespace dlcp::cli
