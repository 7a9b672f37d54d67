#include "nfold/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nfold/error.hpp"
#include "nfold/linalg.hpp"
#include "nfold/rng.hpp"
#include "nfold/simd/kernels.hpp"

namespace nfold {
namespace {

void check_noise(const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !(noise.sigma0 >= 0.0) || !std::isfinite(noise.sigma) ||
      !std::isfinite(noise.sigma0))
    throw PreconditionError("noise levels must be finite and non-negative");
}

void check_dims(const Matrix& a, const SparseSignal& x) {
  if (a.cols() != x.p) throw PreconditionError("measurement: A has p columns but x has other length");
}

}  // namespace

Vector SparseSignal::dense() const {
  Vector out(p, 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) out[support[k]] = values[k];
  return out;
}

SparseSignal gen_sparse_signal(std::size_t p, std::size_t s, double amplitude, std::uint64_t seed) {
  if (s < 1 || s > p) throw PreconditionError("gen_sparse_signal: need 1 <= s <= p");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw PreconditionError("gen_sparse_signal: amplitude must be positive");

  rng::Philox gen(seed);
  std::vector<std::size_t> pool(p);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t pick = k + gen.below(p - k);
    std::swap(pool[k], pool[pick]);
  }
  std::vector<std::pair<std::size_t, double>> entries(s);
  for (std::size_t k = 0; k < s; ++k)
    entries[k] = {pool[k], (gen() >> 63) ? amplitude : -amplitude};
  std::ranges::sort(entries);

  SparseSignal x{p, {}, {}};
  for (const auto& [idx, val] : entries) {
    x.support.push_back(idx);
    x.values.push_back(val);
  }
  return x;
}

void fill_normal(std::span<double> out, double stddev, std::uint64_t seed) {
  if (stddev == 0.0) {
    std::ranges::fill(out, 0.0);
    return;
  }
  rng::Philox gen(seed);
  for (double& v : out) v = stddev * gen.normal();
}

MeasurementDraw measure_standard(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise,
                                 std::uint64_t seed) {
  check_dims(a, x);
  check_noise(noise);
  MeasurementDraw d;
  d.w.resize(a.rows());
  fill_normal(d.w, noise.sigma, rng::derive_seed(seed, kMeasurementStream));
  d.z.assign(a.cols(), 0.0);
  d.v = d.w;
  d.y = linalg::gemv(a, x.dense());
  simd::axpy(1.0, d.v, d.y);
  return d;
}

MeasurementDraw measure_prenoise(const Matrix& a, const SparseSignal& x, const NoiseSpec& noise,
                                 std::uint64_t seed) {
  check_dims(a, x);
  check_noise(noise);
  MeasurementDraw d;
  d.w.resize(a.rows());
  d.z.resize(a.cols());
  fill_normal(d.w, noise.sigma, rng::derive_seed(seed, kMeasurementStream));
  fill_normal(d.z, noise.sigma0, rng::derive_seed(seed, kSignalNoiseStream));
  d.v = d.w;
  simd::axpy(1.0, linalg::gemv(a, d.z), d.v);
  d.y = linalg::gemv(a, x.dense());
  simd::axpy(1.0, d.v, d.y);
  return d;
}

Matrix effective_noise_covariance(const Matrix& a, const NoiseSpec& noise) {
  check_noise(noise);
  Matrix q = (noise.sigma0 * noise.sigma0) * linalg::outer_gram(a);
  for (std::size_t i = 0; i < q.rows(); ++i) q(i, i) += noise.sigma * noise.sigma;
  return q;
}

}  // namespace nfold
