// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dlcp/cp_model.hpp"

namespace dlcp {

// Little-endian float64 / uint64 streams. Host byte order is checked at
// compile time; big-endian hosts are not supported.

void write_f64(std::ostream& os, const double* p, std::size_t n);
void read_f64(std::istream& is, double* p, std::size_t n);
void write_u64(std::ostream& os, std::uint64_t v);
std::uint64_t read_u64(std::istream& is);

void write_complex(std::ostream& os, const std::complex<double>* p, std::size_t n);
void read_complex(std::istream& is, std::complex<double>* p, std::size_t n);

/// Factors file: u64 N, u64 R, u64 I_1..I_N, then R complex weights, then
/// each factor column-major, complex interleaved.
void save_factors(const CpFactors& f, const std::filesystem::path& path);
CpFactors load_factors(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dlcp
