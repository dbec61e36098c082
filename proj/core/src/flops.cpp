// SPDX-License-Identifier: Apache-2.0
#include "dlcp/flops.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace dlcp {

std::uint64_t cflops_primitive(FlopOp op, const std::vector<std::size_t>& d) {
    auto need = [&](std::size_t k) {
        require(d.size() == k, "cflops_primitive: wrong number of dimensions");
        for (auto v : d) require(v >= 1, "cflops_primitive: dimensions must be positive");
    };
    switch (op) {
        case FlopOp::Gram: {
            need(2);
            const std::uint64_t m = d[0], n = d[1];
            return m * n * n + m * n - (n * n + n) / 2;
        }
        case FlopOp::Matmul: {
            need(3);
            const std::uint64_t m = d[0], n = d[1], l = d[2];
            return 2 * m * n * l - m * l;
        }
        case FlopOp::KhatriRao:
            need(3);
            return static_cast<std::uint64_t>(d[0]) * d[1] * d[2];
        case FlopOp::Hadamard:
            need(2);
            return static_cast<std::uint64_t>(d[0]) * d[1];
        case FlopOp::Inverse: {
            need(1);
            const std::uint64_t n = d[0];
            return n * n * n + n * n + n;
        }
        case FlopOp::Svd: {
            need(1);
            const std::uint64_t n = d[0];
            return (8 * n * n * n + 2) / 3;
        }
    }
    fail_validation("cflops_primitive: unknown operation");
}

namespace {

std::string shape_str(std::initializer_list<std::size_t> v) {
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : "x") + std::to_string(x);
    return s;
}

void add_update(CostReport& rep, const std::string& stage, std::size_t mode, std::uint64_t& acc) {
    const Dims& dims = rep.dims;
    const std::size_t r = rep.rank;
    const std::size_t in = dims[mode];
    auto push = [&](std::string op, std::string shape, std::uint64_t c) {
        rep.items.push_back({stage, std::move(op) + " (mode " + std::to_string(mode + 1) + ")", std::move(shape), c});
        acc += c;
    };
    // Khatri-Rao of the other factors, highest mode first
    std::size_t rows = 0;
    std::size_t grams = 0;
    for (std::size_t l = dims.size(); l-- > 0;) {
        if (l == mode) continue;
        if (rows == 0) {
            rows = dims[l];
        } else {
            push("khatri_rao", shape_str({rows, r}) + " kr " + shape_str({dims[l], r}),
                 cflops_primitive(FlopOp::KhatriRao, {rows, dims[l], r}));
            rows *= dims[l];
        }
    }
    const std::size_t p = rows;
    for (std::size_t l = 0; l < dims.size(); ++l) {
        if (l == mode) continue;
        push("gram", shape_str({dims[l], r}), cflops_primitive(FlopOp::Gram, {dims[l], r}));
        if (grams++ > 0) push("hadamard", shape_str({r, r}), cflops_primitive(FlopOp::Hadamard, {r, r}));
    }
    push("inverse", shape_str({r, r}), cflops_primitive(FlopOp::Inverse, {r}));
    push("matmul kr*inv", shape_str({p, r}) + " * " + shape_str({r, r}), cflops_primitive(FlopOp::Matmul, {p, r, r}));
    push("matmul Y*pinv", shape_str({in, p}) + " * " + shape_str({p, r}), cflops_primitive(FlopOp::Matmul, {in, p, r}));
}

}  // namespace

CostReport cost_profile(const Dims& dims, std::size_t rank, std::size_t iterations, InitMethod method,
                        const MlpArch* arch) {
    require(dims.size() >= 2 && dims.size() <= kMaxOrder, "cost_profile: tensor order must be in [2, 8]");
    for (auto d : dims) require(d >= 1, "cost_profile: dimensions must be positive");
    require(rank >= 1, "cost_profile: rank must be >= 1");
    CostReport rep;
    rep.dims = dims;
    rep.rank = rank;
    rep.iterations = iterations;
    rep.method = method;
    const std::size_t total = num_elements(dims);

    if (method == InitMethod::Svd) {
        for (std::size_t n = 1; n < dims.size(); ++n) {
            const std::size_t p = total / dims[n];
            const auto g = cflops_primitive(FlopOp::Gram, {p, dims[n]});
            const auto s = cflops_primitive(FlopOp::Svd, {dims[n]});
            rep.items.push_back({"init", "gram Y(" + std::to_string(n + 1) + ")", shape_str({p, dims[n]}), g});
            rep.items.push_back({"init", "svd (mode " + std::to_string(n + 1) + ")", shape_str({dims[n]}), s});
            rep.init_cflops += g + s;
        }
    } else if (method == InitMethod::Learned) {
        require(arch != nullptr, "cost_profile: learned init needs an architecture");
        rep.mlp_layers = mlp_flops(*arch);
        for (const auto& l : rep.mlp_layers) {
            rep.mlp_real_flops += l.macs;
            rep.mlp_bias_adds += l.bias_adds;
        }
        const std::uint64_t c = (rep.mlp_real_flops + 5) / 6;
        rep.items.push_back({"init", "mlp forward (real flops / 6)", std::to_string(rep.mlp_real_flops) + " real", c});
        rep.init_cflops = c;
    }

    add_update(rep, "first_update", 0, rep.first_update_cflops);
    for (std::size_t n = 0; n < dims.size(); ++n) add_update(rep, "sweep", n, rep.per_iter_cflops);
    rep.total_cflops = rep.init_cflops + rep.first_update_cflops + iterations * rep.per_iter_cflops;
    return rep;
}

std::string CostReport::to_json() const {
    nlohmann::json j;
    j["dims"] = dims;
    j["rank"] = rank;
    j["iterations"] = iterations;
    j["init"] = to_string(method);
    j["init_cflops"] = init_cflops;
    j["first_update_cflops"] = first_update_cflops;
    j["per_iter_cflops"] = per_iter_cflops;
    j["total_cflops"] = total_cflops;
    j["breakdown"] = nlohmann::json::array();
    for (const auto& it : items)
        j["breakdown"].push_back({{"stage", it.stage}, {"op", it.op}, {"shape", it.shape}, {"cflops", it.cflops}});
    if (method == InitMethod::Learned) {
        j["mlp_real_flops"] = mlp_real_flops;
        j["mlp_bias_adds"] = mlp_bias_adds;
        j["mlp_layers"] = nlohmann::json::array();
        for (const auto& l : mlp_layers)
            j["mlp_layers"].push_back(
                {{"layer", l.layer}, {"in", l.in}, {"out", l.out}, {"macs", l.macs}, {"bias_adds", l.bias_adds}});
    }
    return j.dump(2);
}

std::string CostReport::to_table() const {
    std::ostringstream os;
    os << std::left << std::setw(14) << "stage" << std::setw(34) << "op" << std::setw(22) << "shape" << std::right
       << std::setw(12) << "cflops" << "\n";
    for (const auto& it : items)
        os << std::left << std::setw(14) << it.stage << std::setw(34) << it.op << std::setw(22) << it.shape
           << std::right << std::setw(12) << it.cflops << "\n";
    os << std::fixed << std::setprecision(3);
    os << "init          " << init_cflops << " cflops (" << init_cflops / 1e3 << " k)\n";
    os << "first update  " << first_update_cflops << " cflops (" << first_update_cflops / 1e3 << " k)\n";
    os << "per iteration " << per_iter_cflops << " cflops (" << per_iter_cflops / 1e3 << " k)\n";
    os << "total (K=" << iterations << ")   " << total_cflops << " cflops (" << total_cflops / 1e3 << " k)\n";
    if (method == InitMethod::Learned) {
        for (const auto& l : mlp_layers)
            os << "mlp " << l.layer << ": " << l.in << "x" << l.out << " macs " << l.macs << ", bias adds "
               << l.bias_adds << "\n";
        os << "mlp real flops (macs) " << mlp_real_flops << ", bias adds " << mlp_bias_adds << "\n";
    }
    return os.str();
}

}  // namespace dlcp
