// SPDX-License-Identifier: Apache-2.0
#include "dlcp/initializers.hpp"

#include "dlcp/linalg.hpp"

namespace dlcp {

InitMethod parse_init_method(const std::string& name) {
    if (name == "random") return InitMethod::Random;
    if (name == "svd") return InitMethod::Svd;
    if (name == "dl" || name == "learned") return InitMethod::Learned;
    fail_validation("unknown init method '" + name + "' (expected random, svd or dl)");
}

std::string to_string(InitMethod m) {
    switch (m) {
        case InitMethod::Random: return "random";
        case InitMethod::Svd: return "svd";
        case InitMethod::Learned: return "dl";
    }
    return "?";
}

std::vector<ComplexMatrix> random_init(const Dims& dims, std::size_t rank, const InitSpec& spec, Rng& rng) {
    require(dims.size() >= 2, "random_init: tensor order must be >= 2");
    require(rank >= 1, "random_init: rank must be >= 1");
    require(spec.lo < spec.hi, "random_init: need lo < hi");
    std::uniform_real_distribution<double> u(spec.lo, spec.hi);
    std::vector<ComplexMatrix> out;
    for (std::size_t n = 1; n < dims.size(); ++n) {
        ComplexMatrix a(dims[n], rank);
        for (auto& v : a.data()) {
            const double re = u(rng);
            const double im = spec.is_complex ? u(rng) : 0.0;
            v = cplx(re, im);
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<ComplexMatrix> random_init(const Dims& dims, std::size_t rank, const InitSpec& spec) {
    Rng rng = make_stream(spec.seed);
    return random_init(dims, rank, spec, rng);
}

SvdInit svd_init(const ComplexTensor& y, std::size_t rank) {
    require(y.order() >= 2, "svd_init: tensor order must be >= 2");
    SvdInit out;
    for (std::size_t n = 1; n < y.order(); ++n) {
        require(rank <= y.dim(n), "svd_init: rank exceeds I_" + std::to_string(n + 1));
        LeadingEigvecs le = leading_eigvecs(matricize(y, n), rank);
        out.degenerate = out.degenerate || le.degenerate;
        out.factors.push_back(std::move(le.vectors));
    }
    return out;
}

std::vector<ComplexMatrix> learned_init(const MlpModel& model, const ComplexTensor& y) {
    require(y.dims() == model.arch.dims, "learned_init: tensor shape does not match the model");
    const RealMatrix out = mlp_infer(model, pack_input(y, model.arch.is_complex));
    return unpack_output(out, model.arch.dims, model.arch.rank, model.arch.is_complex);
}

std::vector<ComplexMatrix> make_init(const ComplexTensor& y, std::size_t rank, const InitSpec& spec,
                                     std::uint64_t sample) {
    switch (spec.method) {
        case InitMethod::Random: {
            Rng rng = make_stream(spec.seed, {sample});
            return random_init(y.dims(), rank, spec, rng);
        }
        case InitMethod::Svd: return svd_init(y, rank).factors;
        case InitMethod::Learned:
            require(spec.model != nullptr, "make_init: learned init needs a model");
            require(spec.model->arch.rank == rank, "make_init: model rank differs from the requested rank");
            return learned_init(*spec.model, y);
    }
    fail_validation("make_init: bad method");
}

}  // namespace dlcp
