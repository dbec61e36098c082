// SPDX-License-Identifier: Apache-2.0
#include "dlcp/mlp.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "dlcp/binary_io.hpp"

namespace dlcp {

using json = nlohmann::json;

std::size_t MlpArch::input_dim() const { return (is_complex ? 2 : 1) * num_elements(dims); }

std::size_t MlpArch::output_dim() const {
    std::size_t s = 0;
    for (std::size_t n = 1; n < dims.size(); ++n) s += dims[n];
    return (is_complex ? 2 : 1) * rank * s;
}

void MlpArch::validate() const {
    require(dims.size() >= 2 && dims.size() <= kMaxOrder, "MlpArch: tensor order must be in [2, 8]");
    for (auto d : dims) require(d >= 1, "MlpArch: dimensions must be positive");
    require(rank >= 1, "MlpArch: rank must be >= 1");
    require(hidden >= 1 && layers >= 1, "MlpArch: need at least one hidden layer of at least one unit");
    require(dropout >= 0.0 && dropout < 1.0, "MlpArch: dropout must lie in [0, 1)");
}

std::size_t param_count(const MlpArch& arch) {
    const std::size_t q = arch.hidden, d = arch.layers;
    return arch.input_dim() * q + (d - 1) * q * q + q * arch.output_dim() + d * q + arch.output_dim();
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> layer_shapes(const MlpArch& a) {
    std::vector<std::pair<std::size_t, std::size_t>> s;  // (out, in)
    std::size_t in = a.input_dim();
    for (std::size_t l = 0; l < a.layers; ++l) {
        s.emplace_back(a.hidden, in);
        in = a.hidden;
    }
    s.emplace_back(a.output_dim(), in);
    return s;
}

}  // namespace

MlpModel MlpModel::zeros(const MlpArch& arch) {
    arch.validate();
    MlpModel m;
    m.arch = arch;
    for (auto [out, in] : layer_shapes(arch)) {
        m.weights.emplace_back(out, in);
        m.biases.emplace_back(out, 1);
    }
    return m;
}

MlpModel MlpModel::create(const MlpArch& arch, std::uint64_t seed) {
    MlpModel m = zeros(arch);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        Rng rng = make_stream(seed, {0x1a7e, l});
        RealMatrix& w = m.weights[l];
        const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (auto& v : w.data()) v = u(rng);
    }
    return m;
}

std::size_t MlpModel::num_parameters() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

void MlpModel::validate() const {
    arch.validate();
    const auto shapes = layer_shapes(arch);
    require(weights.size() == shapes.size() && biases.size() == shapes.size(), "MlpModel: wrong layer count");
    for (std::size_t l = 0; l < shapes.size(); ++l) {
        require(weights[l].rows() == shapes[l].first && weights[l].cols() == shapes[l].second,
                "MlpModel: weight shape mismatch in layer " + std::to_string(l));
        require(biases[l].rows() == shapes[l].first && biases[l].cols() == 1,
                "MlpModel: bias shape mismatch in layer " + std::to_string(l));
    }
}

RealMatrix pack_input(const ComplexTensor& y, bool is_complex) {
    const std::size_t n = y.size();
    RealMatrix v((is_complex ? 2 : 1) * n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = y[k].real();
        if (is_complex) v[n + k] = y[k].imag();
    }
    return v;
}

std::vector<ComplexMatrix> unpack_output(const RealMatrix& v, const Dims& dims, std::size_t rank, bool is_complex) {
    std::size_t need = 0;
    for (std::size_t n = 1; n < dims.size(); ++n) need += (is_complex ? 2 : 1) * dims[n] * rank;
    require(v.size() == need, "unpack_output: expected " + std::to_string(need) + " values, got " +
                                  std::to_string(v.size()));
    std::vector<ComplexMatrix> out;
    std::size_t off = 0;
    for (std::size_t n = 1; n < dims.size(); ++n) {
        const std::size_t cnt = dims[n] * rank;
        ComplexMatrix a(dims[n], rank);
        for (std::size_t k = 0; k < cnt; ++k) a[k] = cplx(v[off + k], is_complex ? v[off + cnt + k] : 0.0);
        off += (is_complex ? 2 : 1) * cnt;
        out.push_back(std::move(a));
    }
    return out;
}

RealMatrix mlp_infer(const MlpModel& model, const RealMatrix& x) {
    require(x.rows() == model.arch.input_dim() && x.cols() == 1, "mlp_infer: input dimension mismatch");
    RealMatrix h = x;
    const std::size_t last = model.weights.size() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        h = ad::affine_value(model.weights[l], h, model.biases[l]);
        if (l < last)
            for (auto& v : h.data()) v = v > 0.0 ? v : 0.0;
        else
            for (auto& v : h.data()) v = std::tanh(v);
    }
    return h;
}

std::vector<RealMatrix> dropout_masks(const MlpArch& arch, Rng& rng) {
    std::vector<RealMatrix> masks;
    if (arch.dropout <= 0.0) return masks;
    const double keep = 1.0 - arch.dropout;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t l = 0; l < arch.layers; ++l) {
        RealMatrix m(arch.hidden, 1);
        for (auto& v : m.data()) v = u(rng) < arch.dropout ? 0.0 : 1.0 / keep;
        masks.push_back(std::move(m));
    }
    return masks;
}

MlpVars bind_parameters(ad::Tape& t, const MlpModel& model) {
    MlpVars v;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        v.weights.push_back(t.param(model.weights[l]));
        v.biases.push_back(t.param(model.biases[l]));
    }
    return v;
}

ad::RVar mlp_forward(ad::Tape& t, const MlpModel& model, const MlpVars& vars, ad::RVar x,
                     const std::vector<RealMatrix>& masks) {
    require(masks.empty() || masks.size() == model.arch.layers, "mlp_forward: one mask per hidden layer");
    ad::RVar h = x;
    const std::size_t last = model.weights.size() - 1;
    for (std::size_t l = 0; l < last; ++l) {
        h = ad::relu(t, ad::affine(t, vars.weights[l], h, vars.biases[l]));
        if (!masks.empty()) h = ad::dropout(t, h, masks[l]);
    }
    return ad::tanh(t, ad::affine(t, vars.weights[last], h, vars.biases[last]));
}

std::vector<FlopItem> mlp_flops(const MlpArch& arch) {
    std::vector<FlopItem> items;
    const auto shapes = layer_shapes(arch);
    for (std::size_t l = 0; l < shapes.size(); ++l) {
        FlopItem it;
        it.layer = l + 1 < shapes.size() ? "hidden" + std::to_string(l + 1) : "output";
        it.out = shapes[l].first;
        it.in = shapes[l].second;
        it.macs = static_cast<std::uint64_t>(it.in) * it.out;
        it.bias_adds = it.out;
        items.push_back(it);
    }
    return items;
}

void save_model(const MlpModel& model, const std::filesystem::path& dir) {
    model.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    const MlpArch& a = model.arch;
    json j = {{"format_version", kModelFormatVersion},
              {"dims", a.dims},
              {"rank", a.rank},
              {"hidden", a.hidden},
              {"layers", a.layers},
              {"dropout", a.dropout},
              {"complex", a.is_complex},
              {"input_dim", a.input_dim()},
              {"output_dim", a.output_dim()},
              {"parameters", model.num_parameters()},
              {"hidden_activation", "relu"},
              {"output_activation", "tanh"}};
    write_text_file(dir / "model.json", j.dump(2) + "\n");

    std::ofstream os(dir / "weights.bin", std::ios::binary);
    if (!os) throw IoError("cannot open " + (dir / "weights.bin").string() + " for writing");
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const RealMatrix& w = model.weights[l];
        std::vector<double> row_major(w.size());
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t k = 0; k < w.cols(); ++k) row_major[i * w.cols() + k] = w(i, k);
        write_f64(os, row_major.data(), row_major.size());
        write_f64(os, model.biases[l].data().data(), model.biases[l].size());
    }
}

MlpModel load_model(const std::filesystem::path& dir) {
    json j;
    try {
        j = json::parse(read_text_file(dir / "model.json"));
    } catch (const json::exception& e) {
        throw IoError("malformed " + (dir / "model.json").string() + ": " + e.what());
    }
    MlpArch a;
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw IoError("unsupported model format version in " + dir.string());
        a.dims = j.at("dims").get<Dims>();
        a.rank = j.at("rank").get<std::size_t>();
        a.hidden = j.at("hidden").get<std::size_t>();
        a.layers = j.at("layers").get<std::size_t>();
        a.dropout = j.at("dropout").get<double>();
        a.is_complex = j.at("complex").get<bool>();
    } catch (const json::exception& e) {
        throw IoError("malformed " + (dir / "model.json").string() + ": " + e.what());
    }
    MlpModel m = MlpModel::zeros(a);
    std::ifstream is(dir / "weights.bin", std::ios::binary);
    if (!is) throw IoError("cannot open " + (dir / "weights.bin").string());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        RealMatrix& w = m.weights[l];
        std::vector<double> row_major(w.size());
        read_f64(is, row_major.data(), row_major.size());
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t k = 0; k < w.cols(); ++k) w(i, k) = row_major[i * w.cols() + k];
        read_f64(is, m.biases[l].data().data(), m.biases[l].size());
    }
    if (is.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in weights.bin");
    return m;
}

}  // namespace dlcp
