// SPDX-License-Identifier: Apache-2.0
#include "dlcp/binary_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace dlcp {

static_assert(std::endian::native == std::endian::little, "dlcp binary formats assume a little-endian host");

void write_f64(std::ostream& os, const double* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!os) throw IoError("write failed");
}

void read_f64(std::istream& is, double* p, std::size_t n) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw IoError("unexpected end of binary data");
}

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
    if (!os) throw IoError("write failed");
}

std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw IoError("unexpected end of binary data");
    return v;
}

void write_complex(std::ostream& os, const std::complex<double>* p, std::size_t n) {
    write_f64(os, reinterpret_cast<const double*>(p), 2 * n);
}

void read_complex(std::istream& is, std::complex<double>* p, std::size_t n) {
    read_f64(is, reinterpret_cast<double*>(p), 2 * n);
}

void save_factors(const CpFactors& f, const std::filesystem::path& path) {
    f.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    write_u64(os, f.order());
    write_u64(os, f.rank());
    for (auto d : f.dims()) write_u64(os, d);
    write_complex(os, f.weights.data(), f.rank());
    for (const auto& a : f.factors) write_complex(os, a.data().data(), a.size());
}

CpFactors load_factors(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    const auto n = read_u64(is);
    const auto r = read_u64(is);
    if (n < 1 || n > kMaxOrder || r < 1 || r > 4096) throw IoError("malformed factors header in " + path.string());
    Dims dims(n);
    for (auto& d : dims) {
        d = read_u64(is);
        if (d < 1 || d > (1u << 24)) throw IoError("malformed factors header in " + path.string());
    }
    std::vector<cplx> w(r);
    read_complex(is, w.data(), r);
    std::vector<ComplexMatrix> factors;
    for (auto d : dims) {
        ComplexMatrix a(d, r);
        read_complex(is, a.data().data(), a.size());
        factors.push_back(std::move(a));
    }
    return CpFactors(std::move(w), std::move(factors));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace dlcp
