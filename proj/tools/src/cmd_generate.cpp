// SPDX-License-Identifier: Apache-2.0
#include "command.hpp"
#include "dlcp/dataset.hpp"

namespace dlcp::cli {

namespace {

void finish_dataset(RunContext& ctx, const Dataset& ds) {
    save_dataset(ds, ctx.out);
    ctx.outputs = {"meta.json", "data.bin"};
    ctx.seeds["seed"] = ds.meta.seed;
}

}  // namespace

std::vector<Command> register_generate(CLI::App& app) {
    std::vector<Command> out;

    {
        auto cfg = std::make_shared<SyntheticConfig>();
        Command c;
        c.app = app.add_subcommand("gen-synthetic", "Noisy low-rank tensors with U(0,1) factors");
        c.app->add_option("--dims", cfg->dims, "Tensor shape, comma separated")->delimiter(',')->capture_default_str();
        c.app->add_option("--rank", cfg->rank, "CP rank")->capture_default_str();
        c.app->add_option("--count", cfg->count, "Number of samples")->capture_default_str();
        c.app->add_option("--snr-db", cfg->snr_db, "Per-sample SNR in dB")->capture_default_str();
        c.app->add_option("--dist", cfg->dist, "Factor distribution")
            ->check(CLI::IsMember({"real-uniform", "complex-uniform"}))
            ->capture_default_str();
        c.app->add_flag("--noise-free", cfg->noise_free, "Store clean tensors as the noisy input");
        c.app->add_option("--seed", cfg->seed, "Random seed")->capture_default_str();
        add_common_options(c, true);
        c.run = [cfg, threads = c.threads](RunContext& ctx) {
            cfg->threads = *threads;
            const Dataset ds = gen_synthetic(*cfg);
            ctx.config = {{"dims", cfg->dims},   {"rank", cfg->rank}, {"count", cfg->count},
                          {"snr_db", cfg->snr_db}, {"dist", cfg->dist}, {"noise_free", cfg->noise_free},
                          {"seed", cfg->seed}};
            finish_dataset(ctx, ds);
        };
        out.push_back(std::move(c));
    }

    {
        auto cfg = std::make_shared<ChannelGenConfig>();
        Command c;
        c.app = app.add_subcommand("gen-channel", "Coarse estimates of random mmWave MIMO-OFDM block channels");
        c.app->add_option("--ms", cfg->ms, "MS array size")->capture_default_str();
        c.app->add_option("--bs", cfg->bs, "BS array size")->capture_default_str();
        c.app->add_option("--subcarriers", cfg->constants.m0, "Total subcarriers")->capture_default_str();
        c.app->add_option("--block", cfg->block, "Subcarriers per training block")->capture_default_str();
        c.app->add_option("--rank", cfg->rank, "Number of paths")->capture_default_str();
        c.app->add_option("--count", cfg->count, "Number of samples")->capture_default_str();
        c.app->add_option("--snr-set", cfg->snr_set, "SNR values in dB, one drawn per sample")
            ->delimiter(',')
            ->capture_default_str();
        c.app->add_option("--fs", cfg->constants.fs, "Sampling rate in Hz")->capture_default_str();
        c.app->add_option("--max-delay-ns", cfg->constants.max_delay_ns, "Upper bound of the path delay")
            ->capture_default_str();
        c.app->add_flag("--noise-free", cfg->noise_free, "No receiver noise");
        c.app->add_flag("--bs-first", cfg->bs_first, "Tensor modes (BS, MS, subcarrier)");
        c.app->add_option("--seed", cfg->seed, "Random seed")->capture_default_str();
        add_common_options(c, true);
        c.run = [cfg, threads = c.threads](RunContext& ctx) {
            cfg->threads = *threads;
            const Dataset ds = gen_channel(*cfg);
            ctx.config = {{"ms", cfg->ms},
                          {"bs", cfg->bs},
                          {"subcarriers", cfg->constants.m0},
                          {"block", cfg->block},
                          {"rank", cfg->rank},
                          {"count", cfg->count},
                          {"snr_set_db", cfg->snr_set},
                          {"fs_hz", cfg->constants.fs},
                          {"d_over_lambda", cfg->constants.d_over_lambda},
                          {"max_delay_ns", cfg->constants.max_delay_ns},
                          {"noise_free", cfg->noise_free},
                          {"bs_first", cfg->bs_first},
                          {"seed", cfg->seed}};
            finish_dataset(ctx, ds);
        };
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace dlcp::cli
