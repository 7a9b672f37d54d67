#include "nfold/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nfold/error.hpp"

namespace nfold::io {
namespace {

std::size_t read_count(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw ConfigError(std::string("missing ") + what);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
    throw ConfigError(std::string("bad ") + what + " '" + tok + "'");
  return v;
}

double read_real(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw ConfigError("unexpected end of data");
  return parse_real(tok);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  return is;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, ptr);
}

double parse_real(std::string_view token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError("not a finite real number: '" + std::string(token) + "'");
  return v;
}

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_real(m(i, j));
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  const std::size_t n = read_count(is, "row count");
  const std::size_t p = read_count(is, "column count");
  Matrix m(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) m(i, j) = read_real(is);
  return m;
}

void write_vector(std::ostream& os, std::span<const double> v) {
  os << v.size() << '\n';
  for (double x : v) os << format_real(x) << '\n';
}

Vector read_vector(std::istream& is) {
  const std::size_t len = read_count(is, "vector length");
  Vector v(len);
  for (double& x : v) x = read_real(is);
  return v;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path);
  write_matrix(os, m);
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

Matrix load_matrix(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_matrix(is);
}

void save_vector(const std::filesystem::path& path, std::span<const double> v) {
  auto os = open_out(path);
  write_vector(os, v);
  if (!os) throw IoError("write failed: '" + path.string() + "'");
}

Vector load_vector(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_vector(is);
}

}  // namespace nfold::io
