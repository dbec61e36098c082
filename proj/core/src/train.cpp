// SPDX-License-Identifier: Apache-2.0
#include "dlcp/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dlcp/parallel.hpp"
#include "dlcp/rng.hpp"
#include "dlcp/unrolled.hpp"

namespace dlcp {

AdamState AdamState::like(std::span<const RealMatrix> params, double lr) {
    AdamState s;
    s.lr = lr;
    for (const auto& p : params) {
        s.m.emplace_back(p.rows(), p.cols());
        s.v.emplace_back(p.rows(), p.cols());
    }
    return s;
}

void adam_step(AdamState& s, std::span<RealMatrix> params, std::span<const RealMatrix> grads) {
    require(params.size() == grads.size() && params.size() == s.m.size(), "adam_step: block count mismatch");
    ++s.step;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t b = 0; b < params.size(); ++b) {
        RealMatrix& p = params[b];
        const RealMatrix& g = grads[b];
        require(p.size() == g.size() && p.size() == s.m[b].size(), "adam_step: shape mismatch");
        for (std::size_t k = 0; k < p.size(); ++k) {
            s.m[b][k] = s.beta1 * s.m[b][k] + (1.0 - s.beta1) * g[k];
            s.v[b][k] = s.beta2 * s.v[b][k] + (1.0 - s.beta2) * g[k] * g[k];
            const double mh = s.m[b][k] / c1;
            const double vh = s.v[b][k] / c2;
            p[k] -= s.lr * mh / (std::sqrt(vh) + s.eps);
        }
    }
}

std::vector<TrainStage> parse_stages(const std::string& text) {
    std::vector<TrainStage> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        TrainStage st;
        const auto a = item.find(':');
        const auto b = a == std::string::npos ? a : item.find(':', a + 1);
        require(a != std::string::npos && b != std::string::npos, "stages: expected K:lr:epochs, got '" + item + "'");
        try {
            std::size_t used = 0;
            const long k = std::stol(item.substr(0, a), &used);
            require(used == a && k >= 0, "stages: bad K in '" + item + "'");
            st.k = static_cast<std::size_t>(k);
            st.lr = std::stod(item.substr(a + 1, b - a - 1));
            const long e = std::stol(item.substr(b + 1));
            require(e >= 1, "stages: epochs must be >= 1 in '" + item + "'");
            st.epochs = static_cast<std::size_t>(e);
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const ValidationError*>(&e)) throw;
            throw ValidationError("stages: cannot parse '" + item + "'");
        }
        require(std::isfinite(st.lr) && st.lr >= 0.0, "stages: learning rate must be finite and >= 0");
        out.push_back(st);
    }
    require(!out.empty(), "stages: empty schedule");
    return out;
}

namespace {

constexpr std::size_t kChunk = 8;

struct ChunkSum {
    double loss = 0.0;
    std::size_t ok = 0, failed = 0;
    std::vector<RealMatrix> gw, gb;
};

}  // namespace

std::vector<EpochRecord> train(MlpModel& model, std::span<const ComplexTensor> data, const TrainConfig& cfg,
                               const EpochCallback& on_epoch) {
    model.validate();
    require(!data.empty(), "train: empty dataset");
    require(cfg.batch >= 1, "train: batch size must be >= 1");
    require(!cfg.stages.empty(), "train: empty stage schedule");
    for (const auto& y : data) require(y.dims() == model.arch.dims, "train: sample shape does not match the model");

    std::vector<RealMatrix*> params;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        params.push_back(&model.weights[l]);
        params.push_back(&model.biases[l]);
    }
    std::vector<RealMatrix> zero_like;
    for (auto* p : params) zero_like.emplace_back(p->rows(), p->cols());
    AdamState adam = AdamState::like(zero_like, cfg.stages.front().lr);

    std::vector<std::size_t> order(data.size());
    std::vector<EpochRecord> history;
    std::size_t epoch = 0;
    for (std::size_t s = 0; s < cfg.stages.size(); ++s) {
        const TrainStage& st = cfg.stages[s];
        adam.lr = st.lr;
        for (std::size_t e = 0; e < st.epochs; ++e, ++epoch) {
            std::iota(order.begin(), order.end(), 0);
            Rng shuffle_rng = make_stream(cfg.seed, {0x5e, epoch});
            std::shuffle(order.begin(), order.end(), shuffle_rng);

            double epoch_loss = 0.0;
            std::size_t epoch_ok = 0, epoch_failed = 0;
            const std::size_t n_batches = (data.size() + cfg.batch - 1) / cfg.batch;
            for (std::size_t b = 0; b < n_batches; ++b) {
                const std::size_t lo = b * cfg.batch;
                const std::size_t hi = std::min(data.size(), lo + cfg.batch);
                const std::size_t n_chunks = (hi - lo + kChunk - 1) / kChunk;
                std::vector<ChunkSum> chunks(n_chunks);
                parallel_for(n_chunks, cfg.threads, [&](std::size_t c) {
                    ChunkSum& cs = chunks[c];
                    for (std::size_t i = lo + c * kChunk; i < std::min(hi, lo + (c + 1) * kChunk); ++i) {
                        Rng mrng = make_stream(cfg.seed, {0xd0, epoch, b, i - lo});
                        const auto masks = dropout_masks(model.arch, mrng);
                        LossGrad lg;
                        try {
                            lg = unrolled_loss(model, data[order[i]], st.k, masks, true);
                        } catch (const NumericalError&) {
                            ++cs.failed;
                            continue;
                        }
                        bool finite = true;
                        for (const auto& g : lg.grad_w)
                            for (auto v : g.data()) finite = finite && std::isfinite(v);
                        if (!finite) {
                            ++cs.failed;
                            continue;
                        }
                        if (cs.ok == 0) {
                            cs.gw = std::move(lg.grad_w);
                            cs.gb = std::move(lg.grad_b);
                        } else {
                            for (std::size_t l = 0; l < cs.gw.size(); ++l) {
                                cs.gw[l] += lg.grad_w[l];
                                cs.gb[l] += lg.grad_b[l];
                            }
                        }
                        cs.loss += lg.loss;
                        ++cs.ok;
                    }
                });

                std::vector<RealMatrix> grads = zero_like;
                double batch_loss = 0.0;
                std::size_t ok = 0;
                for (const auto& cs : chunks) {
                    epoch_failed += cs.failed;
                    if (cs.ok == 0) continue;
                    for (std::size_t l = 0; l < cs.gw.size(); ++l) {
                        grads[2 * l] += cs.gw[l];
                        grads[2 * l + 1] += cs.gb[l];
                    }
                    batch_loss += cs.loss;
                    ok += cs.ok;
                }
                if (ok == 0) continue;
                for (auto& g : grads) g *= 1.0 / static_cast<double>(ok);
                std::vector<RealMatrix> current;
                for (auto* p : params) current.push_back(std::move(*p));
                adam_step(adam, current, grads);
                for (std::size_t k = 0; k < params.size(); ++k) *params[k] = std::move(current[k]);
                epoch_loss += batch_loss;
                epoch_ok += ok;
            }
            if (2 * epoch_failed > data.size())
                throw NumericalError("train: epoch " + std::to_string(epoch + 1) + " aborted, " +
                                     std::to_string(epoch_failed) + " of " + std::to_string(data.size()) +
                                     " samples non-finite");
            EpochRecord rec{epoch + 1, s + 1, epoch_ok ? epoch_loss / static_cast<double>(epoch_ok) : 0.0,
                            epoch_failed};
            history.push_back(rec);
            if (on_epoch) on_epoch(rec);
        }
    }
    return history;
}

}  // namespace dlcp
