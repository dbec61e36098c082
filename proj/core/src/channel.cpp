// SPDX-License-Identifier: Apache-2.0
#include "dlcp/channel.hpp"

#include <cmath>
#include <numbers>

namespace dlcp {

using std::numbers::pi;

ChannelParams gen_params(std::size_t rank, Rng& rng, const ChannelConstants& c) {
    require(rank >= 1, "gen_params: rank must be >= 1");
    ChannelParams p;
    const double k = 2.0 * pi * c.d_over_lambda;
    for (std::size_t r = 0; r < rank; ++r) {
        const double aoa = uniform(rng, -pi / 2, pi / 2);
        const double aod = uniform(rng, -pi / 2, pi / 2);
        p.theta1.push_back(k * std::sin(aoa));
        p.theta2.push_back(k * std::sin(aod));
        p.tau_ns.push_back(uniform(rng, 0.0, c.max_delay_ns));
        p.beta.push_back(complex_normal(rng, 1.0));
    }
    return p;
}

double delay_generator(double tau_ns, const ChannelConstants& c) {
    return 2.0 * pi * tau_ns * 1e-9 * c.fs / static_cast<double>(c.m0);
}

BlockChannel build_block_channel(const ChannelParams& p, std::size_t i1, std::size_t i2, std::size_t m,
                                 std::size_t m_s, const ChannelConstants& c) {
    const std::size_t r = p.rank();
    require(r >= 1 && p.theta1.size() == r && p.theta2.size() == r && p.tau_ns.size() == r,
            "build_block_channel: inconsistent parameter lengths");
    require(i1 >= 1 && i2 >= 1 && m >= 1, "build_block_channel: dimensions must be positive");
    require(m_s >= 1 && m_s + m - 1 <= c.m0, "build_block_channel: subcarrier block out of range");

    std::vector<double> z3(r);
    std::vector<cplx> w(r);
    for (std::size_t k = 0; k < r; ++k) {
        z3[k] = delay_generator(p.tau_ns[k], c);
        w[k] = p.beta[k] * std::polar(1.0, -z3[k]);
    }
    ComplexMatrix a3(m, r);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < m; ++i) a3(i, k) = std::polar(1.0, -static_cast<double>(m_s - 1 + i) * z3[k]);

    BlockChannel out;
    out.factors = CpFactors(std::move(w), {vandermonde(p.theta1, i1), vandermonde(p.theta2, i2), std::move(a3)});
    out.h = reconstruct(out.factors);
    return out;
}

ComplexMatrix dft_matrix(std::size_t n) {
    ComplexMatrix f(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            f(i, k) = std::polar(s, -2.0 * pi * static_cast<double>((i * k) % n) / static_cast<double>(n));
    return f;
}

PilotConfig PilotConfig::dft(std::size_t i1, std::size_t i2, double sigma2) {
    PilotConfig c;
    c.f1 = dft_matrix(i1);
    c.f2 = dft_matrix(i2);
    c.x.assign(i2, cplx{1.0, 0.0});
    c.sigma2 = sigma2;
    c.validate();
    return c;
}

void PilotConfig::validate() const {
    require(f1.rows() == f1.cols() && f2.rows() == f2.cols(), "PilotConfig: need N₁ = I₁ and N₂ = I₂");
    require(x.size() == f2.cols(), "PilotConfig: pilot length must equal N₂");
    require(std::isfinite(sigma2) && sigma2 >= 0.0, "PilotConfig: noise variance must be finite and >= 0");
    require(max_rel_diff(matmul_a_bh(f1, f1), ComplexMatrix::identity(f1.rows())) < 1e-10,
            "PilotConfig: F₁ rows are not orthonormal");
    require(max_rel_diff(matmul_a_bh(f2, f2), ComplexMatrix::identity(f2.rows())) < 1e-10,
            "PilotConfig: F₂ rows are not orthonormal");
    for (const auto& v : x) require(std::abs(std::abs(v) - 1.0) < 1e-12, "PilotConfig: pilots must be unit-modulus");
}

double noise_variance_for_snr(const ComplexTensor& h, double snr_db) {
    require(std::isfinite(snr_db), "SNR must be a finite number of dB");
    require(h.size() > 0, "noise_variance_for_snr: empty tensor");
    return frob_norm_sq(h) / (static_cast<double>(h.size()) * std::pow(10.0, snr_db / 10.0));
}

ComplexTensor received_signal(const ComplexTensor& h, const PilotConfig& cfg, Rng& rng) {
    require(h.order() == 3 && h.dim(0) == cfg.f1.rows() && h.dim(1) == cfg.f2.rows(),
            "received_signal: channel shape does not match the pilot configuration");
    ComplexMatrix xf2t = transpose(cfg.f2);  // diag(x)·F₂ᵀ
    for (std::size_t i = 0; i < xf2t.rows(); ++i)
        for (std::size_t j = 0; j < xf2t.cols(); ++j) xf2t(i, j) *= cfg.x[i];
    const ComplexMatrix f1h = adjoint(cfg.f1);
    ComplexTensor y = mode_n_product(mode_n_product(h, f1h, 0), xf2t, 1);
    ComplexTensor noise({cfg.f1.rows(), cfg.f2.cols(), h.dim(2)});
    if (cfg.sigma2 > 0.0) {
        for (auto& v : noise.data()) v = complex_normal(rng, cfg.sigma2);
        y += mode_n_product(noise, f1h, 0);
    }
    return y;
}

ComplexTensor coarse_estimate(const ComplexTensor& y, const PilotConfig& cfg) {
    require(y.order() == 3 && y.dim(0) == cfg.f1.cols() && y.dim(1) == cfg.f2.cols(),
            "coarse_estimate: received tensor shape does not match the pilot configuration");
    return mode_n_product(mode_n_product(y, cfg.f1, 0), conj(cfg.f2), 1);
}

namespace {

double correlation(std::span<const cplx> a, double z) {
    // |Σ_i conj(a_i)·e^{−j i z}|
    cplx s{};
    const cplx step = std::polar(1.0, -z);
    cplx e{1.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * e;
        e *= step;
    }
    return std::abs(s);
}

}  // namespace

double extract_generating_vector(std::span<const cplx> a) {
    require(a.size() >= 2, "extract_generating_vector: need at least two entries");
    double nrm = 0.0;
    for (const auto& v : a) nrm += std::norm(v);
    require(nrm > 0.0, "extract_generating_vector: zero vector");

    constexpr std::size_t grid = 4096;
    const double h = 2.0 * pi / grid;
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t k = 0; k < grid; ++k) {
        const double v = correlation(a, -pi + h * static_cast<double>(k + 1));
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }
    const double center = -pi + h * static_cast<double>(best + 1);
    double lo = center - h, hi = center + h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = correlation(a, x1), f2 = correlation(a, x2);
    while (hi - lo > 1e-8) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = correlation(a, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = correlation(a, x1);
        }
    }
    double z = 0.5 * (lo + hi);
    // Newton polish on |s(z)|² so the result is insensitive to rounding in the bracket
    for (int it = 0; it < 4; ++it) {
        cplx s{}, s1{}, s2{};
        const cplx step = std::polar(1.0, -z);
        cplx e{1.0, 0.0};
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double di = static_cast<double>(i);
            const cplx t = std::conj(a[i]) * e;
            s += t;
            s1 += cplx(0.0, -di) * t;
            s2 += -di * di * t;
            e *= step;
        }
        const double d1 = 2.0 * (std::conj(s) * s1).real();
        const double d2 = 2.0 * (std::conj(s1) * s1 + std::conj(s) * s2).real();
        if (!(d2 < 0.0)) break;
        const double dz = d1 / d2;
        if (std::abs(dz) > 1e-6) break;
        z -= dz;
    }
    if (z <= -pi) z += 2.0 * pi;
    if (z > pi) z -= 2.0 * pi;
    return z;
}

}  // namespace dlcp
