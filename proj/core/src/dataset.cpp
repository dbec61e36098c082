// SPDX-License-Identifier: Apache-2.0
#include "dlcp/dataset.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dlcp/binary_io.hpp"
#include "dlcp/parallel.hpp"
#include "dlcp/rng.hpp"

namespace dlcp {

using json = nlohmann::json;

std::size_t DatasetMeta::param_len() const {
    if (!has_params) return 0;
    if (family == "channel") return 1 + 5 * rank;
    std::size_t s = 0;
    for (auto d : dims) s += d;
    return 2 * rank + 2 * rank * s;
}

void DatasetMeta::validate() const {
    require(family == "synthetic" || family == "channel", "dataset: unknown family '" + family + "'");
    require(dims.size() >= 2 && dims.size() <= kMaxOrder, "dataset: tensor order must be in [2, 8]");
    for (auto d : dims) require(d >= 1, "dataset: dimensions must be positive");
    require(rank >= 1, "dataset: rank must be >= 1");
    require(count >= 1, "dataset: count must be >= 1");
    require(sample_snr_db.size() == count, "dataset: need one SNR per sample");
    if (family == "channel") require(dims.size() == 3, "dataset: channel tensors are 3-way");
}

namespace {

json meta_to_json(const DatasetMeta& m) {
    json j = {{"format_version", kDatasetFormatVersion},
              {"family", m.family},
              {"dims", m.dims},
              {"rank", m.rank},
              {"count", m.count},
              {"snr_set_db", m.snr_set},
              {"sample_snr_db", m.sample_snr_db},
              {"snr_definition", "sigma2 = ||clean||_F^2 / (numel * 10^(snr/10)), per sample"},
              {"seed", m.seed},
              {"complex", m.is_complex},
              {"has_clean", m.has_clean},
              {"has_params", m.has_params},
              {"noise_free", m.noise_free},
              {"param_len", m.param_len()},
              {"layout", "per sample: noisy tensor, clean tensor, parameter block; float64 LE, complex "
                         "interleaved, column-major"}};
    if (m.family == "synthetic") {
        j["dist"] = m.dist;
        j["param_block"] = "weights (R complex), then factors A_1..A_N column-major complex";
    } else {
        j["fs_hz"] = m.constants.fs;
        j["m0"] = m.constants.m0;
        j["d_over_lambda"] = m.constants.d_over_lambda;
        j["max_delay_ns"] = m.constants.max_delay_ns;
        j["block"] = m.block;
        j["mode_order"] = m.bs_first ? "bs,ms,subcarrier" : "ms,bs,subcarrier";
        j["param_block"] = "m_s, then per path: theta_mode1, theta_mode2, tau_ns, beta_re, beta_im";
    }
    return j;
}

DatasetMeta meta_from_json(const json& j) {
    DatasetMeta m;
    if (j.at("format_version").get<int>() != kDatasetFormatVersion)
        throw IoError("unsupported dataset format version");
    m.family = j.at("family").get<std::string>();
    m.dims = j.at("dims").get<Dims>();
    m.rank = j.at("rank").get<std::size_t>();
    m.count = j.at("count").get<std::size_t>();
    m.snr_set = j.at("snr_set_db").get<std::vector<double>>();
    m.sample_snr_db = j.at("sample_snr_db").get<std::vector<double>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.is_complex = j.at("complex").get<bool>();
    m.has_clean = j.at("has_clean").get<bool>();
    m.has_params = j.at("has_params").get<bool>();
    m.noise_free = j.value("noise_free", false);
    if (m.family == "synthetic") {
        m.dist = j.value("dist", std::string("real-uniform"));
    } else {
        m.constants.fs = j.at("fs_hz").get<double>();
        m.constants.m0 = j.at("m0").get<std::size_t>();
        m.constants.d_over_lambda = j.at("d_over_lambda").get<double>();
        m.constants.max_delay_ns = j.value("max_delay_ns", 100.0);
        m.block = j.at("block").get<std::size_t>();
        m.bs_first = j.at("mode_order").get<std::string>() == "bs,ms,subcarrier";
    }
    return m;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    ds.meta.validate();
    require(ds.samples.size() == ds.meta.count, "save_dataset: sample count differs from meta.count");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::ofstream os(dir / "data.bin", std::ios::binary);
    if (!os) throw IoError("cannot open " + (dir / "data.bin").string() + " for writing");
    const std::size_t numel = num_elements(ds.meta.dims);
    for (const auto& s : ds.samples) {
        require(s.noisy.size() == numel, "save_dataset: sample shape mismatch");
        write_complex(os, s.noisy.data().data(), numel);
        if (ds.meta.has_clean) {
            require(s.clean.size() == numel, "save_dataset: clean tensor missing");
            write_complex(os, s.clean.data().data(), numel);
        }
        if (ds.meta.has_params) {
            require(s.params.size() == ds.meta.param_len(), "save_dataset: parameter block length mismatch");
            write_f64(os, s.params.data(), s.params.size());
        }
    }
    os.close();
    if (!os) throw IoError("write failed: " + (dir / "data.bin").string());
    write_text_file(dir / "meta.json", meta_to_json(ds.meta).dump(2) + "\n");
}

DatasetMeta load_dataset_meta(const std::filesystem::path& dir) {
    try {
        DatasetMeta m = meta_from_json(json::parse(read_text_file(dir / "meta.json")));
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw IoError("malformed " + (dir / "meta.json").string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw IoError("inconsistent " + (dir / "meta.json").string() + ": " + e.what());
    }
}

Dataset load_dataset(const std::filesystem::path& dir) {
    Dataset ds;
    ds.meta = load_dataset_meta(dir);
    const auto& m = ds.meta;
    const std::size_t numel = num_elements(m.dims);
    const std::size_t per_sample =
        (2 * numel * (m.has_clean ? 2 : 1) + m.param_len()) * sizeof(double);
    std::error_code ec;
    const auto bytes = std::filesystem::file_size(dir / "data.bin", ec);
    if (ec) throw IoError("cannot stat " + (dir / "data.bin").string());
    if (bytes != per_sample * m.count)
        throw IoError("data.bin has " + std::to_string(bytes) + " bytes, expected " +
                      std::to_string(per_sample * m.count));
    std::ifstream is(dir / "data.bin", std::ios::binary);
    if (!is) throw IoError("cannot open " + (dir / "data.bin").string());
    ds.samples.resize(m.count);
    for (auto& s : ds.samples) {
        s.noisy = ComplexTensor(m.dims);
        read_complex(is, s.noisy.data().data(), numel);
        if (m.has_clean) {
            s.clean = ComplexTensor(m.dims);
            read_complex(is, s.clean.data().data(), numel);
        }
        if (m.has_params) {
            s.params.resize(m.param_len());
            read_f64(is, s.params.data(), s.params.size());
        }
    }
    return ds;
}

Dataset gen_synthetic(const SyntheticConfig& cfg) {
    require(cfg.dims.size() >= 2 && cfg.dims.size() <= kMaxOrder, "gen-synthetic: tensor order must be in [2, 8]");
    for (auto d : cfg.dims) require(d >= 1, "gen-synthetic: dimensions must be positive");
    require(cfg.rank >= 1, "gen-synthetic: rank must be >= 1");
    require(cfg.count >= 1, "gen-synthetic: count must be >= 1");
    require(std::isfinite(cfg.snr_db), "gen-synthetic: SNR must be finite");
    require(cfg.dist == "real-uniform" || cfg.dist == "complex-uniform",
            "gen-synthetic: dist must be real-uniform or complex-uniform");
    const bool cx = cfg.dist == "complex-uniform";

    Dataset ds;
    DatasetMeta& m = ds.meta;
    m.family = "synthetic";
    m.dims = cfg.dims;
    m.rank = cfg.rank;
    m.count = cfg.count;
    m.snr_set = {cfg.snr_db};
    m.sample_snr_db.assign(cfg.count, cfg.snr_db);
    m.seed = cfg.seed;
    m.is_complex = cx;
    m.noise_free = cfg.noise_free;
    m.dist = cfg.dist;

    ds.samples.resize(cfg.count);
    parallel_for(cfg.count, cfg.threads, [&](std::size_t k) {
        Rng rng = make_stream(cfg.seed, {0x5f, k});
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<ComplexMatrix> factors;
        for (auto d : cfg.dims) {
            ComplexMatrix a(d, cfg.rank);
            for (auto& v : a.data()) {
                const double re = u(rng);
                v = cplx(re, cx ? u(rng) : 0.0);
            }
            factors.push_back(std::move(a));
        }
        CpFactors f(std::move(factors));
        Sample& s = ds.samples[k];
        s.clean = reconstruct(f);
        s.noisy = s.clean;
        if (!cfg.noise_free) {
            const double sigma2 = noise_variance_for_snr(s.clean, cfg.snr_db);
            if (cx) {
                for (auto& v : s.noisy.data()) v += complex_normal(rng, sigma2);
            } else {
                std::normal_distribution<double> nd(0.0, std::sqrt(sigma2));
                for (auto& v : s.noisy.data()) v += nd(rng);
            }
        }
        for (const auto& w : f.weights) {
            s.params.push_back(w.real());
            s.params.push_back(w.imag());
        }
        for (const auto& a : f.factors)
            for (const auto& v : a.data()) {
                s.params.push_back(v.real());
                s.params.push_back(v.imag());
            }
    });
    return ds;
}

CpFactors synthetic_truth(const Sample& s, const DatasetMeta& meta) {
    require(meta.family == "synthetic" && meta.has_params, "synthetic_truth: dataset has no synthetic factors");
    require(s.params.size() == meta.param_len(), "synthetic_truth: parameter block length mismatch");
    std::size_t off = 0;
    auto next = [&] {
        const cplx v(s.params[off], s.params[off + 1]);
        off += 2;
        return v;
    };
    std::vector<cplx> w(meta.rank);
    for (auto& v : w) v = next();
    std::vector<ComplexMatrix> factors;
    for (auto d : meta.dims) {
        ComplexMatrix a(d, meta.rank);
        for (auto& v : a.data()) v = next();
        factors.push_back(std::move(a));
    }
    return CpFactors(std::move(w), std::move(factors));
}

Dataset gen_channel(const ChannelGenConfig& cfg) {
    require(cfg.ms >= 1 && cfg.bs >= 1 && cfg.block >= 1, "gen-channel: array and block sizes must be positive");
    require(cfg.rank >= 1, "gen-channel: rank must be >= 1");
    require(cfg.count >= 1, "gen-channel: count must be >= 1");
    require(cfg.block <= cfg.constants.m0, "gen-channel: block longer than the subcarrier count");
    require(cfg.constants.fs > 0.0 && std::isfinite(cfg.constants.fs), "gen-channel: sampling rate must be positive");
    require(!cfg.snr_set.empty(), "gen-channel: empty SNR set");
    for (double s : cfg.snr_set) require(std::isfinite(s), "gen-channel: SNR values must be finite numbers");

    Dataset ds;
    DatasetMeta& m = ds.meta;
    m.family = "channel";
    m.dims = cfg.bs_first ? Dims{cfg.bs, cfg.ms, cfg.block} : Dims{cfg.ms, cfg.bs, cfg.block};
    m.rank = cfg.rank;
    m.count = cfg.count;
    m.snr_set = cfg.snr_set;
    m.sample_snr_db.resize(cfg.count);
    m.seed = cfg.seed;
    m.is_complex = true;
    m.noise_free = cfg.noise_free;
    m.constants = cfg.constants;
    m.block = cfg.block;
    m.bs_first = cfg.bs_first;

    const std::size_t max_start = cfg.constants.m0 - cfg.block + 1;
    const PilotConfig base = PilotConfig::dft(cfg.ms, cfg.bs, 0.0);
    ds.samples.resize(cfg.count);
    parallel_for(cfg.count, cfg.threads, [&](std::size_t k) {
        Rng rng = make_stream(cfg.seed, {0xc4, k});
        const ChannelParams p = gen_params(cfg.rank, rng, cfg.constants);
        const std::size_t m_s = std::uniform_int_distribution<std::size_t>(1, max_start)(rng);
        const double snr = cfg.snr_set[std::uniform_int_distribution<std::size_t>(0, cfg.snr_set.size() - 1)(rng)];
        const BlockChannel bc = build_block_channel(p, cfg.ms, cfg.bs, cfg.block, m_s, cfg.constants);

        PilotConfig pc = base;
        pc.sigma2 = cfg.noise_free ? 0.0 : noise_variance_for_snr(bc.h, snr);
        const ComplexTensor y = received_signal(bc.h, pc, rng);
        Sample& s = ds.samples[k];
        s.noisy = coarse_estimate(y, pc);
        s.clean = bc.h;
        if (cfg.bs_first) {
            const std::size_t perm[3] = {1, 0, 2};
            s.noisy = permute_modes(s.noisy, perm);
            s.clean = permute_modes(s.clean, perm);
        }
        m.sample_snr_db[k] = snr;
        s.params.push_back(static_cast<double>(m_s));
        for (std::size_t r = 0; r < cfg.rank; ++r) {
            s.params.push_back(cfg.bs_first ? p.theta2[r] : p.theta1[r]);
            s.params.push_back(cfg.bs_first ? p.theta1[r] : p.theta2[r]);
            s.params.push_back(p.tau_ns[r]);
            s.params.push_back(p.beta[r].real());
            s.params.push_back(p.beta[r].imag());
        }
    });
    return ds;
}

ChannelTruth channel_truth(const Sample& s, const DatasetMeta& meta) {
    require(meta.family == "channel" && meta.has_params, "channel_truth: dataset has no channel parameters");
    require(s.params.size() == meta.param_len(), "channel_truth: parameter block length mismatch");
    ChannelTruth t;
    t.m_s = static_cast<std::size_t>(s.params[0]);
    for (std::size_t r = 0; r < meta.rank; ++r) {
        const double* q = s.params.data() + 1 + 5 * r;
        t.params.theta1.push_back(q[0]);
        t.params.theta2.push_back(q[1]);
        t.params.tau_ns.push_back(q[2]);
        t.params.beta.emplace_back(q[3], q[4]);
    }
    return t;
}

double sample_sigma2(const Dataset& ds, std::size_t k) {
    const auto& m = ds.meta;
    require(k < ds.samples.size(), "sample_sigma2: index out of range");
    if (m.noise_free || !m.has_clean) return 0.0;
    return noise_variance_for_snr(ds.samples[k].clean, m.sample_snr_db[k]);
}

}  // namespace dlcp
