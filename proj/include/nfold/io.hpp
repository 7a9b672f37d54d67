#pragma once

// Text formats shared by the CLI and the harness.
//
// Matrix: first line "n p", then n lines of p space-separated entries.
// Vector: first line "len", then one entry per line.
// Reals are written in scientific notation with 17 significant digits, which
// round-trips every double exactly. Lines end with LF.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nfold/matrix.hpp"

namespace nfold::io {

/// 17 significant digits, scientific, '.' separator, locale independent.
std::string format_real(double v);
/// Strict parse of a full token; throws ConfigError.
double parse_real(std::string_view token);

void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);
void write_vector(std::ostream& os, std::span<const double> v);
Vector read_vector(std::istream& is);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);
void save_vector(const std::filesystem::path& path, std::span<const double> v);
Vector load_vector(const std::filesystem::path& path);

}  // namespace nfold::io
