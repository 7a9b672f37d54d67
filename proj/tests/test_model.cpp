#include <doctest.h>

#include <cmath>

#include "nfold/ensembles.hpp"
#include "nfold/error.hpp"
#include "nfold/io.hpp"
#include "nfold/linalg.hpp"
#include "nfold/model.hpp"
#include "support.hpp"

#include <sstream>

using namespace nfold;

TEST_SUITE("sparse signal") {
  TEST_CASE("full support gives ±a everywhere") {
    const SparseSignal x = gen_sparse_signal(8, 8, 1.0, 4);
    CHECK(x.support == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
    for (double v : x.values) CHECK(std::abs(v) == 1.0);
  }

  TEST_CASE("precondition and determinism") {
    CHECK_THROWS_AS(gen_sparse_signal(8, 0, 1.0, 1), PreconditionError);
    CHECK_THROWS_AS(gen_sparse_signal(8, 9, 1.0, 1), PreconditionError);
    CHECK_THROWS_AS(gen_sparse_signal(8, 2, 0.0, 1), PreconditionError);
    const SparseSignal a = gen_sparse_signal(1000, 10, 1.0, 5);
    const SparseSignal b = gen_sparse_signal(1000, 10, 1.0, 5);
    CHECK(a.support == b.support);
    CHECK(a.values == b.values);
    CHECK(std::is_sorted(a.support.begin(), a.support.end()));
    CHECK(std::adjacent_find(a.support.begin(), a.support.end()) == a.support.end());
  }

  TEST_CASE("support positions are uniform") {
    std::vector<int> hits(10, 0);
    for (std::uint64_t seed = 0; seed < 5000; ++seed)
      for (std::size_t i : gen_sparse_signal(10, 3, 1.0, seed).support) ++hits[i];
    for (int h : hits) CHECK(std::abs(h - 1500) < 5 * std::sqrt(1500.0));
  }
}

TEST_SUITE("measurement") {
  TEST_CASE("noiseless standard model") {
    const Matrix a = gen_gaussian(6, 12, 2);
    const SparseSignal x = gen_sparse_signal(12, 3, 2.0, 3);
    const MeasurementDraw d = measure_standard(a, x, {0.0, 0.0}, 1);
    CHECK(d.y == linalg::gemv(a, x.dense()));

    const SparseSignal e1{3, {0}, {1.0}};
    CHECK(measure_standard(Matrix::identity(3), e1, {0.0, 0.0}, 1).y == Vector{1, 0, 0});
  }

  TEST_CASE("measurement noise variance") {
    const Matrix one = Matrix::identity(1);
    const SparseSignal x{1, {0}, {1.0}};
    constexpr int N = 10000;
    double s = 0, s2 = 0;
    for (int k = 0; k < N; ++k) {
      const double w = measure_standard(one, x, {1.0, 0.0}, static_cast<std::uint64_t>(k)).w[0];
      s += w;
      s2 += w * w;
    }
    const double var = (s2 - s * s / N) / (N - 1);
    CHECK(std::abs(var - 1.0) <= 0.05);
  }

  TEST_CASE("pre-noise model identities") {
    const Matrix a = gen_gaussian(10, 40, 8);
    const SparseSignal x = gen_sparse_signal(40, 4, 1.0, 9);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const MeasurementDraw d = measure_prenoise(a, x, {0.3, 0.7}, seed);
      // y = A x + (w + A z) bitwise
      Vector v = d.w;
      const Vector az = linalg::gemv(a, d.z);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] + az[i];
      CHECK(v == d.v);
      Vector y = linalg::gemv(a, x.dense());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = y[i] + v[i];
      CHECK(y == d.y);
      // y = A(x + z) + w up to round-off
      Vector xz = x.dense();
      for (std::size_t i = 0; i < xz.size(); ++i) xz[i] += d.z[i];
      Vector y2 = linalg::gemv(a, xz);
      for (std::size_t i = 0; i < y2.size(); ++i) y2[i] += d.w[i];
      double diff = 0.0;
      for (std::size_t i = 0; i < y2.size(); ++i) diff = std::max(diff, std::abs(y2[i] - d.y[i]));
      CHECK(diff <= 1e-12 * norm2(d.y));
    }
  }

  TEST_CASE("sigma0 = 0 reproduces the standard model exactly") {
    const Matrix a = gen_gaussian(10, 40, 8);
    const SparseSignal x = gen_sparse_signal(40, 4, 1.0, 9);
    const MeasurementDraw s = measure_standard(a, x, {0.5, 0.0}, 77);
    const MeasurementDraw p = measure_prenoise(a, x, {0.5, 0.0}, 77);
    CHECK(s.y == p.y);
    CHECK(s.w == p.w);
    CHECK(measure_prenoise(a, x, {0.0, 0.0}, 3).y == linalg::gemv(a, x.dense()));
  }

  TEST_CASE("w is untouched by sigma0") {
    const Matrix a = gen_gaussian(10, 40, 8);
    const SparseSignal x = gen_sparse_signal(40, 4, 1.0, 9);
    CHECK(measure_prenoise(a, x, {0.5, 0.0}, 5).w == measure_prenoise(a, x, {0.5, 2.0}, 5).w);
  }

  TEST_CASE("dimension mismatch") {
    const SparseSignal x = gen_sparse_signal(5, 1, 1.0, 1);
    CHECK_THROWS_AS(measure_standard(Matrix(3, 4), x, {1, 0}, 1), PreconditionError);
    CHECK_THROWS_AS(measure_prenoise(Matrix(3, 4), x, {1, 1}, 1), PreconditionError);
  }
}

TEST_SUITE("effective covariance") {
  TEST_CASE("sigma0 = 0 gives sigma² I") {
    const Matrix q = effective_noise_covariance(gen_gaussian(5, 20, 1), {2.0, 0.0});
    CHECK(max_abs_diff(q, 4.0 * Matrix::identity(5)) == 0.0);
  }

  TEST_CASE("orthobases: Q = γ I") {
    const Matrix a = gen_concat_orthobases(16, 4, 3);
    CHECK(max_abs_diff(effective_noise_covariance(a, {1.0, 1.0}), 5.0 * Matrix::identity(16)) <= 1e-10);
  }

  TEST_CASE("matches the empirical covariance of v") {
    // Monte Carlo oracle: independent draws through measure_prenoise.
    const std::size_t n = 16;
    const Matrix a = gen_gaussian(n, 64, 21);
    const NoiseSpec noise{0.8, 1.1};
    const SparseSignal x{64, {0}, {1.0}};
    constexpr std::size_t N = 100000;
    Vector mean(n, 0.0);
    Matrix m2(n, n);
    for (std::size_t k = 0; k < N; ++k) {
      const Vector v = measure_prenoise(a, x, noise, 1000 + k).v;
      for (std::size_t i = 0; i < n; ++i) {
        mean[i] += v[i];
        for (std::size_t j = 0; j < n; ++j) m2(i, j) += v[i] * v[j];
      }
    }
    Matrix emp(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) emp(i, j) = (m2(i, j) - mean[i] * mean[j] / N) / (N - 1);
    const Matrix q = effective_noise_covariance(a, noise);
    CHECK(frobenius_norm(emp - q) / frobenius_norm(q) <= 0.05);
  }
}

TEST_CASE("vector and matrix text formats round-trip exactly") {
  const Matrix m = test::random_matrix(3, 5, 8);
  std::stringstream ss;
  io::write_matrix(ss, m);
  CHECK(io::read_matrix(ss) == m);

  const Vector v{1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0};
  std::stringstream vs;
  io::write_vector(vs, v);
  CHECK(vs.str().substr(0, 2) == "4\n");
  CHECK(io::read_vector(vs) == v);
  CHECK(io::format_real(0.1) == "1.0000000000000001e-01");

  std::stringstream bad("2 2\n1 2\n3 nan\n");
  CHECK_THROWS_AS(io::read_matrix(bad), ConfigError);
  std::stringstream short_data("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(io::read_matrix(short_data), ConfigError);
}
