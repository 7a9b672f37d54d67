#pragma once

// Test-only helpers. Random data comes from std::mt19937_64 so fixtures do not
// depend on the library's own generator.

#include <cmath>
#include <random>

#include "nfold/matrix.hpp"

namespace nfold::test {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = dist(gen);
  return m;
}

inline Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  Matrix m = random_matrix(n, n, seed);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

/// Naive triple loop, the reference for the kernel-backed products.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

/// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
inline double power_iteration_norm(const Matrix& s, int iters = 5000) {
  Vector v(s.rows(), 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.01 * static_cast<double>(i);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector w(v.size(), 0.0);
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.cols(); ++j) w[i] += s(i, j) * v[j];
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nrm;
    lambda = nrm;
  }
  return lambda;
}

}  // namespace nfold::test
