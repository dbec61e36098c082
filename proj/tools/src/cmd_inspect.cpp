// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "command.hpp"
#include "dlcp/binary_io.hpp"
#include "dlcp/channel.hpp"
#include "dlcp/flops.hpp"

namespace dlcp::cli {

namespace {

struct FlopsOpts {
    std::vector<std::size_t> dims{32, 8, 4};
    std::size_t rank = 4;
    std::size_t iters = 1;
    std::string init = "random";
    std::size_t hidden = 512;
    std::size_t layers = 4;
    bool real = false;
    bool json = false;
};

Command make_flops(CLI::App& app) {
    auto o = std::make_shared<FlopsOpts>();
    Command c;
    c.app = app.add_subcommand("flops", "Complex-flop cost of initialization and CP-ALS sweeps");
    c.app->add_option("--dims", o->dims, "Tensor shape, comma separated")->delimiter(',')->capture_default_str();
    c.app->add_option("--rank", o->rank, "CP rank")->capture_default_str();
    c.app->add_option("--iters", o->iters, "Number of sweeps K")->capture_default_str();
    c.app->add_option("--init", o->init, "Initializer")
        ->check(CLI::IsMember({"random", "svd", "dl", "learned"}))
        ->capture_default_str();
    c.app->add_option("--hidden", o->hidden, "Units per hidden layer (dl)")->capture_default_str();
    c.app->add_option("--layers", o->layers, "Hidden layers (dl)")->capture_default_str();
    c.app->add_flag("--real", o->real, "Real-valued network input/output (dl)");
    c.app->add_flag("--json", o->json, "Print JSON instead of a table");
    add_common_options(c, false);
    c.run = [o](RunContext& ctx) {
        const InitMethod method = parse_init_method(o->init);
        MlpArch arch;
        arch.dims = Dims(o->dims.begin(), o->dims.end());
        arch.rank = o->rank;
        arch.hidden = o->hidden;
        arch.layers = o->layers;
        arch.is_complex = !o->real;
        if (method == InitMethod::Learned) arch.validate();
        const CostReport rep = cost_profile(arch.dims, o->rank, o->iters, method, &arch);
        const std::string js = rep.to_json() + "\n";
        const std::string table = rep.to_table();
        std::cout << (o->json ? js : table);
        if (ctx.out.empty()) return;
        ensure_dir(ctx.out);
        write_text_file(ctx.out / "cost.json", js);
        write_text_file(ctx.out / "cost.txt", table);
        ctx.outputs = {"cost.json", "cost.txt"};
        ctx.config = {{"dims", o->dims}, {"rank", o->rank}, {"iters", o->iters}, {"init", o->init}};
        if (method == InitMethod::Learned)
            ctx.config.update({{"hidden", o->hidden}, {"layers", o->layers}, {"complex", !o->real}});
    };
    return c;
}

struct ExtractOpts {
    std::string factors;
    std::size_t mode = 0;
};

Command make_extract(CLI::App& app) {
    auto o = std::make_shared<ExtractOpts>();
    Command c;
    c.app = app.add_subcommand("extract", "Generating vector z of each Vandermonde factor column");
    c.app->add_option("--factors", o->factors, "factors.bin written by decompose")->required();
    c.app->add_option("--mode", o->mode, "Mode to extract, 1-based (0: all)")->capture_default_str();
    add_common_options(c, false);
    c.run = [o](RunContext& ctx) {
        const CpFactors f = load_factors(o->factors);
        require(o->mode <= f.order(), "--mode exceeds the tensor order");
        std::vector<std::array<std::string, 3>> rows;
        for (std::size_t n = 0; n < f.order(); ++n) {
            if (o->mode && n + 1 != o->mode) continue;
            const ComplexMatrix& a = f.factors[n];
            for (std::size_t r = 0; r < a.cols(); ++r) {
                std::vector<cplx> col(a.rows());
                for (std::size_t i = 0; i < a.rows(); ++i) col[i] = a(i, r);
                rows.push_back({std::to_string(n + 1), std::to_string(r + 1), num(extract_generating_vector(col))});
            }
        }
        std::cout << "mode,column,z\n";
        for (const auto& r : rows) std::cout << r[0] << "," << r[1] << "," << r[2] << "\n";
        if (ctx.out.empty()) return;
        ensure_dir(ctx.out);
        CsvWriter csv(ctx, "generating_vectors.csv", {"mode", "column", "z"});
        for (const auto& r : rows) csv.row({r[0], r[1], r[2]});
        csv.close();
        ctx.config = {{"factors", o->factors}, {"mode", o->mode}};
        ctx.inputs.push_back(o->factors);
    };
    return c;
}

}  // namespace

std::vector<Command> register_inspect(CLI::App& app) {
    std::vector<Command> out;
    out.push_back(make_flops(app));
    out.push_back(make_extract(app));
    return out;
}

}  // namespace dlcp::cli
