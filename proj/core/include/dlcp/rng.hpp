// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace dlcp {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream keyed by (seed, ids...). Parallel and serial runs that
/// key streams by sample index draw identical numbers.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids = {}) {
    std::uint64_t h = splitmix64(seed);
    for (auto id : ids) h = splitmix64(h ^ splitmix64(id + 0x632be59bd9b4e019ULL));
    return Rng(h);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// CN(0, var): real and imaginary parts i.i.d. N(0, var/2).
inline std::complex<double> complex_normal(Rng& rng, double var) {
    std::normal_distribution<double> nd(0.0, std::sqrt(var / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

}  // namespace dlcp
